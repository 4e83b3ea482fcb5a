#ifndef DHOLO_CONJUGATE_HPP
#define DHOLO_CONJUGATE_HPP

#include <cmath>
#include <cstdint>
#include <array>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "graph.hpp"
#include "harmonic.hpp"

namespace dholo {

// Real harmonic f and its conjugate parts g (f + i g holomorphic). At a vertex s
// with gradient delta = grad_s f the admissible grad_s g form the sphere
//   C = { a : sum a = 0, <a, delta> = 0, |a| = |delta| }.

namespace detail {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Orthonormal basis (columns) of the kernel of A.
inline Mat kernel_basis(const Mat& A, double rel = 1e-12) {
    const auto n = A.cols();
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = rel * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

inline Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }
inline std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// Normalised projection of the first standard axis that is not (nearly) orthogonal to span(B).
inline Vec canonical_axis(const Mat& B) {
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
        Vec p = B * B.row(i).transpose();
        if (p.norm() > 1e-6) return p / p.norm();
    }
    return B.col(0);
}

inline Vec random_unit(const Mat& B, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec c(B.cols());
    do {
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = g(rng);
    } while (c.norm() < 1e-12);
    return B * (c / c.norm());
}

}  // namespace detail

/// Conjugate-part constraint at one vertex.
class SphereConstraint {
public:
    explicit SphereConstraint(std::vector<double> delta, double tol = 1e-9) : delta_(std::move(delta)) {
        const auto n = delta_.size();
        if (n < 3) throw input_error("conjugate constraints need valency >= 3");
        double sum = 0.0, sq = 0.0;
        for (double d : delta_) {
            sum += d;
            sq += d * d;
        }
        radius_ = std::sqrt(sq);
        if (std::abs(sum) > tol * (1.0 + radius_ * std::sqrt(static_cast<double>(n))))
            throw input_error("gradient does not sum to zero (function not harmonic here)");
        detail::Mat A(2, static_cast<Eigen::Index>(n));
        A.row(0).setOnes();
        A.row(1) = detail::to_vec(delta_).transpose();
        basis_ = detail::kernel_basis(A);
    }

    [[nodiscard]] std::size_t size() const { return delta_.size(); }
    [[nodiscard]] const std::vector<double>& delta() const { return delta_; }
    [[nodiscard]] double radius() const { return radius_; }
    /// Orthonormal basis of {sum a = 0, <a, delta> = 0}.
    [[nodiscard]] const detail::Mat& basis() const { return basis_; }

    /// Half-width of the projection of C on coordinate k.
    [[nodiscard]] double alpha(std::size_t k) const {
        const double n = static_cast<double>(size());
        const double dk = delta_.at(k);
        const double r2 = radius_ * radius_;
        const double rad = r2 * (n - 1.0) / n - dk * dk;
        // cancellation leaves a few ulps of r2 in degenerate directions
        if (rad <= 16.0 * std::numeric_limits<double>::epsilon() * r2) return 0.0;
        return std::sqrt(rad);
    }

    /// Largest violation of the three conditions by a.
    [[nodiscard]] double residual(const std::vector<double>& a) const {
        double sum = 0.0, dot = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            sum += a.at(i);
            dot += a[i] * delta_[i];
            sq += a[i] * a[i];
        }
        return std::max({std::abs(sum), std::abs(dot), std::abs(std::sqrt(sq) - radius_)});
    }

private:
    std::vector<double> delta_;
    double radius_ = 0.0;
    detail::Mat basis_;
};

struct ProjectionRange {
    double alpha = 0.0;
    /// Valency 3: the projection is the two points +-alpha, not the segment.
    bool two_points = false;
};

inline ProjectionRange projection_range(const std::vector<double>& delta, std::size_t k, double tol = 1e-9) {
    SphereConstraint c(delta, tol);
    if (k >= c.size()) throw input_error("coordinate index out of range");
    return {c.alpha(k), c.size() == 3};
}

/// Requested component lies outside the projection of C.
struct conjugate_infeasible : infeasible_error {
    conjugate_infeasible(const std::string& what, double alpha_, double a1_)
        : infeasible_error(what), alpha(alpha_), a1(a1_) {}
    double alpha;
    double a1;
};

enum class CompletionMode { deterministic, seeded };

/// A point of C whose k-th coordinate is a1.
///
/// The minimum-norm point of the slice {sum a = 0, <a, delta> = 0, a_k = a1}
/// is pushed out to the sphere along the remaining free directions: in
/// deterministic mode along the projection of the first standard axis not
/// orthogonal to them, in seeded mode along a uniform random direction.
inline std::vector<double> conjugate_step(const SphereConstraint& c, std::size_t k, double a1,
                                          CompletionMode mode = CompletionMode::deterministic,
                                          std::mt19937_64* rng = nullptr, double tol = 1e-9) {
    if (k >= c.size()) throw input_error("coordinate index out of range");
    if (mode == CompletionMode::seeded && rng == nullptr) throw input_error("seeded completion needs a generator");
    const double rho = c.radius();
    const double alpha = c.alpha(k);
    const double slack = tol * (1.0 + rho);
    if (std::abs(a1) > alpha + slack)
        throw conjugate_infeasible("component " + std::to_string(a1) + " outside [-" + std::to_string(alpha) + ", " +
                                       std::to_string(alpha) + "]",
                                   alpha, a1);
    if (c.size() == 3 && std::abs(std::abs(a1) - alpha) > slack)
        throw conjugate_infeasible("valency 3 admits only +-" + std::to_string(alpha), alpha, a1);

    const auto& B = c.basis();
    const auto n = static_cast<Eigen::Index>(c.size());
    detail::Vec b = B * B.row(static_cast<Eigen::Index>(k)).transpose();
    const double nb2 = b.squaredNorm();
    detail::Vec a = detail::Vec::Zero(n);
    detail::Mat free = B;
    if (nb2 > 1e-24) {
        a = (a1 / nb2) * b;
        detail::Mat A(3, n);
        A.row(0).setOnes();
        A.row(1) = detail::to_vec(c.delta()).transpose();
        A.row(2) = b.transpose();
        free = detail::kernel_basis(A);
    }
    const double r2 = rho * rho - a.squaredNorm();
    if (free.cols() > 0 && r2 > 0.0) {
        const detail::Vec dir = mode == CompletionMode::seeded ? detail::random_unit(free, *rng) : detail::canonical_axis(free);
        a += std::sqrt(r2) * dir;
    }
    a(static_cast<Eigen::Index>(k)) = a1;
    return detail::to_std(a);
}

/// Some point of C with no component prescribed.
inline std::vector<double> sphere_point(const SphereConstraint& c, CompletionMode mode, std::mt19937_64* rng) {
    const auto& B = c.basis();
    if (c.radius() == 0.0 || B.cols() == 0) return std::vector<double>(c.size(), 0.0);
    const detail::Vec dir = mode == CompletionMode::seeded ? detail::random_unit(B, *rng) : detail::canonical_axis(B);
    return detail::to_std(c.radius() * dir);
}

inline std::vector<double> real_gradient(const RealVertexFunction& f, Vertex v) { return oscillation(f, v).entries; }

/// |grad f| - |grad g|, <grad f, grad g>, sum grad g at v.
inline std::array<double, 3> conjugate_conditions(const RealVertexFunction& f, const RealVertexFunction& g, Vertex v) {
    const auto a = real_gradient(f, v), b = real_gradient(g, v);
    double na = 0.0, nb = 0.0, dot = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += a[i] * a[i];
        nb += b[i] * b[i];
        dot += a[i] * b[i];
        sum += b[i];
    }
    return {std::sqrt(na) - std::sqrt(nb), dot, sum};
}

/// f + i g.
inline ComplexFunction combine(const RealVertexFunction& f, const RealVertexFunction& g) {
    std::vector<std::optional<cplx>> vals(f.graph().size());
    for (Vertex v = 0; v < vals.size(); ++v)
        if (f.has_value(v) && g.has_value(v)) vals[v] = cplx(f.value(v), g.value(v));
    return {f.graph_ptr(), std::move(vals), f.boundary_mask()};
}

struct InfeasibilityCertificate {
    Vertex vertex{};
    std::string id;
    /// Sweep: alpha at the vertex. Propagation: largest reachable |grad g|.
    double bound = 0.0;
    /// Sweep: the prescribed component. Propagation: |grad f|.
    double required = 0.0;
    std::string reason;
};

struct ConjugateResult {
    std::optional<RealVertexFunction> g;
    std::optional<InfeasibilityCertificate> failure;
    /// True when the failure is a proof that no conjugate exists.
    bool proven = false;
    [[nodiscard]] bool found() const { return g.has_value(); }
};

namespace detail {

inline void require_real_tree(const RealVertexFunction& f) {
    if (!f.graph().is_tree()) throw input_error("conjugate construction needs a tree");
    for (Vertex v = 0; v < f.graph().size(); ++v)
        if (!f.has_value(v)) throw input_error("no value at vertex '" + f.graph().id(v) + "'");
}

// Vertex of least eccentricity (first in index order).
inline Vertex tree_centre(const Graph& g) {
    Vertex best = 0;
    std::size_t ecc = static_cast<std::size_t>(-1);
    for (Vertex v = 0; v < g.size(); ++v) {
        auto d = g.distances_from(v);
        const std::size_t e = *std::max_element(d.begin(), d.end());
        if (e < ecc) {
            ecc = e;
            best = v;
        }
    }
    return best;
}

inline std::size_t slot(const Graph& g, Vertex s, Vertex t) {
    auto nb = g.neighbors(s);
    return static_cast<std::size_t>(std::find(nb.begin(), nb.end(), t) - nb.begin());
}

// One greedy sweep; root_gradient overrides the root's choice.
inline ConjugateResult sweep(const RealVertexFunction& f, Vertex root, CompletionMode mode, std::mt19937_64& rng,
                             const std::optional<std::vector<double>>& root_gradient, double tol) {
    const Graph& G = f.graph();
    std::vector<double> g(G.size(), 0.0);
    std::vector<std::optional<Vertex>> parent(G.size());
    std::vector<bool> seen(G.size(), false);
    std::queue<Vertex> q;
    q.push(root);
    seen[root] = true;
    while (!q.empty()) {
        const Vertex s = q.front();
        q.pop();
        std::vector<double> a(G.valency(s), 0.0);
        if (f.is_interior(s)) {
            SphereConstraint c(real_gradient(f, s), tol);
            if (!parent[s]) {
                a = root_gradient ? *root_gradient : sphere_point(c, mode, &rng);
            } else {
                const std::size_t k = slot(G, s, *parent[s]);
                const double a1 = g[*parent[s]] - g[s];
                try {
                    a = conjugate_step(c, k, a1, mode, &rng, tol);
                } catch (const conjugate_infeasible& e) {
                    ConjugateResult r;
                    r.failure = InfeasibilityCertificate{s, G.id(s), e.alpha, e.a1, "sweep failed: " + std::string(e.what())};
                    return r;
                }
            }
        }
        auto nb = G.neighbors(s);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (seen[nb[i]]) continue;
            seen[nb[i]] = true;
            parent[nb[i]] = s;
            g[nb[i]] = g[s] + a[i];
            q.push(nb[i]);
        }
    }
    ConjugateResult r;
    r.g = RealVertexFunction(f.graph_ptr(), g, f.boundary_mask());
    return r;
}

}  // namespace detail

/// Ball-by-ball construction of g with g(root) = 0.
///
/// At each vertex the component along the edge to its parent is already fixed
/// and conjugate_step completes the gradient. Under constant |grad f| the
/// projections at both ends of an edge agree, so the sweep never stalls. When
/// every interior vertex is trivalent the sweep has no freedom beyond the two
/// points of C at the root; both are tried and a double failure is a proof.
inline ConjugateResult find_conjugate(const RealVertexFunction& f, std::optional<Vertex> root = std::nullopt,
                                      CompletionMode mode = CompletionMode::deterministic, std::uint64_t seed = 0,
                                      const Tolerance& tol = {}) {
    detail::require_real_tree(f);
    const auto h = is_harmonic(f, tol);
    if (!h.verdict) throw input_error("function is not harmonic at '" + h.at_id + "'");
    bool trivalent = true;
    for (Vertex v : f.interior()) {
        if (f.graph().valency(v) < 3) throw input_error("interior vertex '" + f.graph().id(v) + "' has valency < 3");
        trivalent = trivalent && f.graph().valency(v) == 3;
    }
    const Vertex o = root.value_or(detail::tree_centre(f.graph()));
    if (o >= f.graph().size()) throw input_error("root out of range");
    std::mt19937_64 rng(seed);
    const double step_tol = tol.eps_abs;

    if (!trivalent || !f.is_interior(o)) return detail::sweep(f, o, mode, rng, std::nullopt, step_tol);

    SphereConstraint c(real_gradient(f, o), step_tol);
    auto p = sphere_point(c, CompletionMode::deterministic, nullptr);
    if (mode == CompletionMode::seeded && std::bernoulli_distribution(0.5)(rng))
        for (double& x : p) x = -x;
    auto first = detail::sweep(f, o, mode, rng, p, step_tol);
    if (first.found()) return first;
    for (double& x : p) x = -x;
    auto second = detail::sweep(f, o, mode, rng, p, step_tol);
    if (second.found()) return second;
    first.proven = true;
    first.failure->reason = "no conjugate: both gradient choices at the root fail; " + first.failure->reason;
    return first;
}

/// Propagates bounds on the edge differences of any conjugate g and reports a
/// vertex where they contradict C, or nothing (inconclusive).
///
/// Each edge carries an interval for g(t) - g(s). At a vertex the box of its
/// incident components is cut by the projection bounds alpha_k and by the
/// linear constraints; the vertices of the resulting polytope bound every
/// component and the reachable |grad g|. A gradient of norm |grad f| outside
/// that range is a contradiction.
inline std::optional<InfeasibilityCertificate> forced_propagation_infeasibility(const RealVertexFunction& f,
                                                                               double tol = 1e-9,
                                                                               std::size_t max_rounds = 200) {
    detail::require_real_tree(f);
    const Graph& G = f.graph();
    const auto edges = G.edges();
    std::map<std::pair<Vertex, Vertex>, std::size_t> eidx;
    for (std::size_t i = 0; i < edges.size(); ++i) eidx[edges[i]] = i;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lo(edges.size(), -inf), hi(edges.size(), inf);

    std::vector<Vertex> active;
    for (Vertex v : f.interior())
        if (G.valency(v) >= 3 && G.valency(v) <= 10) active.push_back(v);

    for (std::size_t round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (Vertex s : active) {
            const auto grad = real_gradient(f, s);
            double gsum = 0.0, gsq = 0.0;
            for (double d : grad) {
                gsum += d;
                gsq += d * d;
            }
            if (std::abs(gsum) > 1e-6 * (1.0 + std::sqrt(gsq)))
                return InfeasibilityCertificate{s, G.id(s), 0.0, std::sqrt(gsq), "f is not harmonic here"};
            SphereConstraint c(grad, 1e-6);
            const double rho = c.radius();
            const double slack = tol * (1.0 + rho);
            const auto nb = G.neighbors(s);
            const auto n = static_cast<Eigen::Index>(nb.size());
            std::vector<std::size_t> e(nb.size());
            std::vector<double> sg(nb.size()), blo(nb.size()), bhi(nb.size());
            for (std::size_t k = 0; k < nb.size(); ++k) {
                const Vertex t = nb[k];
                e[k] = eidx.at({std::min(s, t), std::max(s, t)});
                sg[k] = s < t ? 1.0 : -1.0;
                blo[k] = sg[k] > 0 ? lo[e[k]] : -hi[e[k]];
                bhi[k] = sg[k] > 0 ? hi[e[k]] : -lo[e[k]];
                const double al = c.alpha(k) + slack;
                blo[k] = std::max(blo[k], -al);
                bhi[k] = std::min(bhi[k], al);
            }
            auto fail = [&](double bound, const std::string& why) {
                return InfeasibilityCertificate{s, G.id(s), bound, rho, why};
            };
            double lower = 0.0;
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (blo[k] > bhi[k]) return fail(0.0, "incident bounds are empty");
                lower = std::max(lower, std::max(blo[k], -bhi[k]));
            }
            if (lower > rho + slack) return fail(lower, "every admissible gradient is longer than |grad f|");

            // vertices of {sum a = 0, <a, delta> = 0} within the box
            detail::Mat A(2, n);
            A.row(0).setOnes();
            A.row(1) = detail::to_vec(c.delta()).transpose();
            const bool flat = rho <= 1e-14;
            const Eigen::Index r = flat ? 1 : 2;
            std::vector<double> vmin(nb.size(), inf), vmax(nb.size(), -inf);
            double maxnorm = -1.0;
            std::vector<Eigen::Index> F(static_cast<std::size_t>(r));
            auto try_free = [&]() {
                detail::Mat AF(r, r);
                for (Eigen::Index i = 0; i < r; ++i) AF.col(i) = A.col(F[static_cast<std::size_t>(i)]).head(r);
                Eigen::FullPivLU<detail::Mat> lu(AF);
                if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12) return;
                std::vector<Eigen::Index> fixed;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (std::find(F.begin(), F.end(), i) == F.end()) fixed.push_back(i);
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << fixed.size()); ++mask) {
                    detail::Vec a(n);
                    for (std::size_t q = 0; q < fixed.size(); ++q) {
                        const auto i = static_cast<std::size_t>(fixed[q]);
                        a(fixed[q]) = (mask >> q & 1U) ? bhi[i] : blo[i];
                    }
                    detail::Vec rhs = detail::Vec::Zero(r);
                    for (Eigen::Index i : fixed) rhs -= A.col(i).head(r) * a(i);
                    detail::Vec x = lu.solve(rhs);
                    bool inside = true;
                    for (Eigen::Index i = 0; i < r; ++i) {
                        const auto k = static_cast<std::size_t>(F[static_cast<std::size_t>(i)]);
                        a(F[static_cast<std::size_t>(i)]) = x(i);
                        inside = inside && x(i) >= blo[k] - slack && x(i) <= bhi[k] + slack;
                    }
                    if (!inside) continue;
                    maxnorm = std::max(maxnorm, a.norm());
                    for (std::size_t k = 0; k < nb.size(); ++k) {
                        vmin[k] = std::min(vmin[k], a(static_cast<Eigen::Index>(k)));
                        vmax[k] = std::max(vmax[k], a(static_cast<Eigen::Index>(k)));
                    }
                }
            };
            if (r == 1) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    F[0] = i;
                    try_free();
                }
            } else {
                for (Eigen::Index i = 0; i < n; ++i)
                    for (Eigen::Index j = i + 1; j < n; ++j) {
                        F[0] = i;
                        F[1] = j;
                        try_free();
                    }
            }
            if (maxnorm < 0.0) return fail(0.0, "linear constraints are inconsistent with the incident bounds");
            if (maxnorm < rho - slack) return fail(maxnorm, "every admissible gradient is shorter than |grad f|");

            for (std::size_t k = 0; k < nb.size(); ++k) {
                const double nlo = std::max(blo[k], vmin[k] - slack), nhi = std::min(bhi[k], vmax[k] + slack);
                const double elo = sg[k] > 0 ? nlo : -nhi, ehi = sg[k] > 0 ? nhi : -nlo;
                if (elo > lo[e[k]] + 1e-12 * (1.0 + std::abs(elo))) {
                    lo[e[k]] = elo;
                    changed = true;
                }
                if (ehi < hi[e[k]] - 1e-12 * (1.0 + std::abs(ehi))) {
                    hi[e[k]] = ehi;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generators on regular tree balls.

namespace detail {

// Gradient at an interior vertex given the parent component; root gets none.
template <class Rule>
RealVertexFunction build_on_tree(const TreeBallShape& ball, Rule rule) {
    const Graph& G = *ball.graph;
    std::vector<double> f(G.size(), 0.0);
    for (Vertex v = 0; v < G.size(); ++v) {
        if (ball.boundary[v]) continue;
        std::vector<Vertex> kids;
        for (Vertex w : G.neighbors(v))
            if (ball.parent[w] && *ball.parent[w] == v) kids.push_back(w);
        std::optional<double> up;
        if (ball.parent[v]) up = f[*ball.parent[v]] - f[v];
        const std::vector<double> osc = rule(G.valency(v), up);
        for (std::size_t i = 0; i < kids.size(); ++i) f[kids[i]] = f[v] + osc[i];
    }
    return {ball.graph, f, ball.boundary};
}

// n numbers summing to -sum0 with squared norm sq, direction uniform.
inline std::vector<double> spread(std::size_t n, double sum0, double sq, std::mt19937_64& rng) {
    std::vector<double> out(n, -sum0 / static_cast<double>(n));
    const double r2 = sq - sum0 * sum0 / static_cast<double>(n);
    if (n < 2 || r2 <= 0.0) return out;
    std::normal_distribution<double> g;
    std::vector<double> c(n);
    double mean = 0.0, norm = 0.0;
    do {
        mean = 0.0;
        for (auto& x : c) mean += (x = g(rng));
        mean /= static_cast<double>(n);
        norm = 0.0;
        for (auto& x : c) norm += (x - mean) * (x - mean);
    } while (norm < 1e-20);
    for (std::size_t i = 0; i < n; ++i) out[i] += std::sqrt(r2) * (c[i] - mean) / std::sqrt(norm);
    return out;
}

}  // namespace detail

/// Harmonic f on the ball of T_valency with |grad f| = norm at every interior vertex.
inline RealVertexFunction constant_norm_harmonic(std::size_t valency, std::size_t radius, std::uint64_t seed,
                                                 double norm = 1.0) {
    if (valency < 3) throw input_error("valency must be >= 3");
    auto ball = regular_tree_ball(valency, radius);
    std::mt19937_64 rng(seed);
    return detail::build_on_tree(ball, [&](std::size_t n, std::optional<double> up) {
        if (!up) return detail::spread(n, 0.0, norm * norm, rng);
        return detail::spread(n - 1, *up, norm * norm - *up * *up, rng);
    });
}

/// Harmonic f on the ball of T_valency with gradient norms drawn from [lo, hi].
inline RealVertexFunction random_harmonic(std::size_t valency, std::size_t radius, std::uint64_t seed, double lo = 0.5,
                                          double hi = 2.0) {
    if (valency < 3) throw input_error("valency must be >= 3");
    auto ball = regular_tree_ball(valency, radius);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pick(lo, hi);
    return detail::build_on_tree(ball, [&](std::size_t n, std::optional<double> up) {
        const double target = pick(rng);
        if (!up) return detail::spread(n, 0.0, target * target, rng);
        // keep the requested norm reachable given the parent component
        const double need = *up * *up * static_cast<double>(n) / static_cast<double>(n - 1);
        const double sq = std::max(target * target, need * 1.0001) - *up * *up;
        return detail::spread(n - 1, *up, sq, rng);
    });
}

/// Harmonic f on the ball of T_4 (radius >= 2) with no conjugate part.
///
/// Root A = "o" with neighbours B, C, D, E = "o0".."o3". f vanishes on A, B,
/// C and the neighbours of B and C, f(D) = 1, f(E) = -1. Beyond that every
/// vertex passes its incoming oscillation on split evenly over its children.
inline RealVertexFunction dipole_without_conjugate(std::size_t radius = 3) {
    if (radius < 2) throw input_error("the fixture needs radius >= 2");
    auto ball = regular_tree_ball(4, radius);
    return detail::build_on_tree(ball, [](std::size_t n, std::optional<double> up) {
        if (!up) return std::vector<double>{0.0, 0.0, 1.0, -1.0};
        return std::vector<double>(n - 1, -*up / static_cast<double>(n - 1));
    });
}

// ---------------------------------------------------------------------------
// Bounded holomorphic functions on T_4.

/// (r1, r2, theta) with 2 r1 cos(theta) + r2 = 1 and 2 r1^2 cos(2 theta) + r2^2 = -1.
struct ContractionParameters {
    double r1 = 1.0;
    double r2 = 1.0;
    double theta = std::numbers::pi / 2.0;

    [[nodiscard]] std::array<double, 2> residual() const {
        return {2.0 * r1 * std::cos(theta) + r2 - 1.0, 2.0 * r1 * r1 * std::cos(2.0 * theta) + r2 * r2 + 1.0};
    }
    [[nodiscard]] double contraction() const { return std::max(r1, r2); }
    /// Outgoing oscillations for incoming -1.
    [[nodiscard]] std::array<cplx, 3> outgoing() const {
        return {std::polar(r1, theta), std::polar(r1, -theta), cplx(r2, 0.0)};
    }
};

/// Continuation in r1 from the solution (1, 1, pi/2) down to `r1`.
inline ContractionParameters solve_contraction(double r1 = 0.9, std::size_t steps = 40) {
    if (!(r1 > 0.0 && r1 <= 1.0)) throw input_error("r1 must lie in (0, 1]");
    ContractionParameters p;
    for (std::size_t s = 1; s <= steps; ++s) {
        p.r1 = 1.0 + (r1 - 1.0) * static_cast<double>(s) / static_cast<double>(steps);
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
            const auto F = p.residual();
            if (std::abs(F[0]) + std::abs(F[1]) < 1e-15) {
                ok = true;
                break;
            }
            Eigen::Matrix2d J;
            J << 1.0, -2.0 * p.r1 * std::sin(p.theta), 2.0 * p.r2, -4.0 * p.r1 * p.r1 * std::sin(2.0 * p.theta);
            if (std::abs(J.determinant()) < 1e-14) break;
            const Eigen::Vector2d d = J.partialPivLu().solve(Eigen::Vector2d(F[0], F[1]));
            p.r2 -= d(0);
            p.theta -= d(1);
        }
        const auto F = p.residual();
        if (!ok && std::abs(F[0]) + std::abs(F[1]) > 1e-12)
            throw numerical_failure("contraction equations lost their solution at r1 = " + std::to_string(p.r1));
    }
    if (!(p.r2 > 0.0 && p.contraction() < 1.0))
        throw numerical_failure("no contraction factor below 1 at r1 = " + std::to_string(r1));
    return p;
}

struct BoundedHolomorphic {
    ComplexFunction phi;
    ContractionParameters params;
    double r = 1.0;
    cplx delta0;
};

/// phi(O) = 0, the edge to O's first neighbour has oscillation r * delta0 with
/// |delta0| = 1 and a seeded phase; every vertex whose incoming oscillation is
/// d1 sends -d1 * (r1 e^{i theta}, r1 e^{-i theta}, r2) to its children. The
/// oscillation on an edge at depth d is at most r^d.
inline BoundedHolomorphic bounded_holomorphic_T4(std::size_t radius, std::uint64_t seed, double r1 = 0.9) {
    if (radius < 1) throw input_error("radius must be >= 1");
    const auto params = solve_contraction(r1);
    const double r = params.contraction();
    const auto t = params.outgoing();
    std::mt19937_64 rng(seed);
    const cplx delta0 = std::polar(1.0, std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng));
    auto ball = regular_tree_ball(4, radius);
    const Graph& G = *ball.graph;
    std::vector<cplx> phi(G.size(), 0.0);
    for (Vertex v = 0; v < G.size(); ++v) {
        if (ball.boundary[v]) continue;
        std::vector<Vertex> kids;
        for (Vertex w : G.neighbors(v))
            if (ball.parent[w] && *ball.parent[w] == v) kids.push_back(w);
        std::vector<cplx> osc;
        if (!ball.parent[v]) {
            const cplx first = r * delta0;
            osc = {first, -first * t[0], -first * t[1], -first * t[2]};
        } else {
            const cplx d1 = phi[*ball.parent[v]] - phi[v];
            osc = {-d1 * t[0], -d1 * t[1], -d1 * t[2]};
        }
        for (std::size_t i = 0; i < kids.size(); ++i) phi[kids[i]] = phi[v] + osc[i];
    }
    return {ComplexFunction(ball.graph, phi, ball.boundary), params, r, delta0};
}

}  // namespace dholo

#endif  // DHOLO_CONJUGATE_HPP
