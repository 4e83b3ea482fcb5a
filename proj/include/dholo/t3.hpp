#ifndef DHOLO_T3_HPP
#define DHOLO_T3_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eisenstein.hpp"
#include "harmonic.hpp"
#include "hex_lattice.hpp"
#include "moments.hpp"

namespace dholo {

enum class Side { left, right };

/// Vertex of a regular tree seen from a root edge O'O.
///
/// Left words hang off O (the empty left word), right words off O' (the
/// empty right word). Letters are 'a', 'b', ... one per child slot.
struct TreeAddress {
    Side side = Side::left;
    std::string word;

    [[nodiscard]] std::string to_string() const { return (side == Side::left ? "L:" : "R:") + word; }

    static TreeAddress parse(const std::string& s) {
        if (s.size() < 2 || s[1] != ':' || (s[0] != 'L' && s[0] != 'R'))
            throw input_error("bad tree address '" + s + "' (expected L:word or R:word)");
        return {s[0] == 'L' ? Side::left : Side::right, s.substr(2)};
    }

    auto operator<=>(const TreeAddress&) const = default;
};

inline TreeAddress root_address() { return {Side::left, ""}; }
inline TreeAddress back_root_address() { return {Side::right, ""}; }

/// Finite ball of the regular tree with `branching` + 1 neighbours per vertex,
/// around the root edge O'O. A rooted ball holds O' plus the left words of
/// length <= radius; a full ball holds words of length <= radius on both sides.
/// Outermost words (and O' for rooted balls) are boundary.
class TreeBall {
public:
    static constexpr std::size_t max_vertices = 4'000'000;

    static TreeBall rooted(std::size_t branching, std::size_t radius) { return TreeBall(branching, radius, false); }
    static TreeBall full(std::size_t branching, std::size_t radius) { return TreeBall(branching, radius, true); }

    [[nodiscard]] std::size_t branching() const { return k_; }
    [[nodiscard]] std::size_t radius() const { return r_; }
    [[nodiscard]] bool is_full() const { return full_; }
    [[nodiscard]] const GraphPtr& graph() const { return graph_; }
    [[nodiscard]] std::size_t size() const { return addr_.size(); }
    [[nodiscard]] const TreeAddress& address(Vertex v) const { return addr_.at(v); }
    [[nodiscard]] const std::vector<TreeAddress>& addresses() const { return addr_; }
    [[nodiscard]] const std::vector<bool>& boundary() const { return boundary_; }
    /// The neighbour towards the root edge (O' for O and vice versa).
    [[nodiscard]] Vertex parent(Vertex v) const { return parent_.at(v); }
    [[nodiscard]] const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
    [[nodiscard]] Vertex root() const { return 1; }
    [[nodiscard]] Vertex back_root() const { return 0; }

    [[nodiscard]] Vertex index(const TreeAddress& a) const {
        auto it = index_.find(a);
        if (it == index_.end()) throw input_error("address " + a.to_string() + " is not in the ball");
        return it->second;
    }

    /// Vertices whose children are all in the ball, i.e. where a choice is made.
    [[nodiscard]] std::vector<Vertex> branch_points() const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < size(); ++v)
            if (!children_[v].empty()) out.push_back(v);
        return out;
    }

    [[nodiscard]] static std::size_t count_vertices(std::size_t branching, std::size_t radius, bool full) {
        // 1 + k + ... + k^r per side
        std::size_t side = 0, pw = 1;
        for (std::size_t d = 0; d <= radius; ++d) {
            side += pw;
            if (side > max_vertices) return max_vertices + 1;
            pw *= branching;
        }
        return full ? 2 * side : side + 1;
    }

private:
    TreeBall(std::size_t k, std::size_t r, bool full) : k_(k), r_(r), full_(full) {
        if (k < 1 || k > 26) throw input_error("tree branching must be between 1 and 26");
        const std::size_t n = count_vertices(k, r, full);
        if (n > max_vertices)
            throw resource_cap_error("tree ball would have more than " + std::to_string(max_vertices) + " vertices");
        add(back_root_address(), 0, full ? 0 : r);
        add(root_address(), 0, 0);
        parent_[0] = 1;
        parent_[1] = 0;
        std::vector<std::pair<Vertex, Vertex>> edges{{0, 1}};
        // breadth-first, left and right interleaved by depth
        std::vector<Vertex> frontier{1};
        if (full) frontier.push_back(0);
        for (std::size_t d = 0; d < r; ++d) {
            std::vector<Vertex> next;
            for (Vertex v : frontier)
                for (std::size_t c = 0; c < k; ++c) {
                    TreeAddress a = addr_[v];
                    a.word.push_back(static_cast<char>('a' + c));
                    const Vertex w = add(a, v, d + 1);
                    children_[v].push_back(w);
                    edges.emplace_back(v, w);
                    next.push_back(w);
                }
            frontier = std::move(next);
        }
        std::vector<std::string> ids;
        for (const auto& a : addr_) ids.push_back(a.to_string());
        graph_ = make_graph(std::move(ids), edges);
    }

    Vertex add(const TreeAddress& a, Vertex parent, std::size_t depth) {
        const Vertex v = addr_.size();
        addr_.push_back(a);
        index_.emplace(a, v);
        parent_.push_back(parent);
        children_.emplace_back();
        boundary_.push_back(depth == r_);
        return v;
    }

    std::size_t k_, r_;
    bool full_;
    std::vector<TreeAddress> addr_;
    std::map<TreeAddress, Vertex> index_;
    std::vector<Vertex> parent_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<bool> boundary_;
    GraphPtr graph_;
};

/// k-th permutation of {0..n-1} in lexicographic order.
inline std::vector<std::size_t> permutation_from_rank(std::uint64_t rank, std::size_t n) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::uint64_t> fact(n + 1, 1);
    for (std::size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
    if (rank >= fact[n]) throw input_error("permutation rank out of range");
    std::vector<std::size_t> out;
    for (std::size_t i = n; i > 0; --i) {
        const std::uint64_t f = fact[i - 1];
        out.push_back(pool[rank / f]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(rank / f));
        rank %= f;
    }
    return out;
}

/// Per-address bijection from the child letters onto the outgoing factors,
/// stored as a permutation rank. On T3 rank 0 is a -> -j, b -> -j^2 and rank 1
/// is the switch.
class ChoiceAssignment {
public:
    ChoiceAssignment() = default;
    explicit ChoiceAssignment(std::size_t branching) : k_(branching) {}

    [[nodiscard]] std::size_t branching() const { return k_; }
    [[nodiscard]] std::size_t size() const { return rank_.size(); }
    [[nodiscard]] const std::map<TreeAddress, std::uint64_t>& entries() const { return rank_; }

    void set(const TreeAddress& a, std::uint64_t rank) { rank_[a] = rank; }

    [[nodiscard]] std::uint64_t rank(const TreeAddress& a) const {
        auto it = rank_.find(a);
        if (it == rank_.end()) throw input_error("no choice given at " + a.to_string());
        return it->second;
    }
    [[nodiscard]] std::vector<std::size_t> permutation(const TreeAddress& a) const {
        return permutation_from_rank(rank(a), k_);
    }
    [[nodiscard]] bool is_constant() const {
        return std::all_of(rank_.begin(), rank_.end(), [&](const auto& e) { return e.second == rank_.begin()->second; });
    }

    static ChoiceAssignment constant(const TreeBall& ball, std::uint64_t rank = 0) {
        ChoiceAssignment c(ball.branching());
        for (Vertex v : ball.branch_points()) c.set(ball.address(v), rank);
        return c;
    }
    /// T3 only: bit i switches the i-th branch point (ball order).
    static ChoiceAssignment from_bits(const TreeBall& ball, std::uint64_t bits) {
        if (ball.branching() != 2) throw input_error("bit-encoded choices need a binary tree");
        ChoiceAssignment c(2);
        std::size_t i = 0;
        for (Vertex v : ball.branch_points()) c.set(ball.address(v), (bits >> i++) & 1U);
        return c;
    }
    static ChoiceAssignment random(const TreeBall& ball, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uint64_t fact = 1;
        for (std::size_t i = 2; i <= ball.branching(); ++i) fact *= i;
        std::uniform_int_distribution<std::uint64_t> pick(0, fact - 1);
        ChoiceAssignment c(ball.branching());
        for (Vertex v : ball.branch_points()) c.set(ball.address(v), pick(rng));
        return c;
    }

private:
    std::size_t k_ = 2;
    std::map<TreeAddress, std::uint64_t> rank_;
};

template <class T>
struct TripodFactors;

template <>
struct TripodFactors<cplx> {
    static cplx minus_j() { return -kJ; }
    static cplx minus_j2() { return -kJ2; }
};

template <>
struct TripodFactors<EisensteinNumber> {
    static EisensteinNumber minus_j() { return -EisensteinNumber::j(); }
    static EisensteinNumber minus_j2() { return -EisensteinNumber::j2(); }
};

/// phi(SX) = phi(S) + alpha_S(X) (phi(S) - phi(S')) on a binary tree ball.
template <class T>
std::vector<T> extend_values(const TreeBall& ball, const T& alpha, const T& beta, const ChoiceAssignment& choices) {
    if (ball.branching() != 2) throw input_error("holomorphic extension needs the 3-valent tree");
    std::vector<T> val(ball.size());
    val[ball.back_root()] = alpha;
    val[ball.root()] = beta;
    const T f0 = TripodFactors<T>::minus_j(), f1 = TripodFactors<T>::minus_j2();
    for (Vertex v = 0; v < ball.size(); ++v) {
        const auto& ch = ball.children(v);
        if (ch.empty()) continue;
        const bool sw = choices.rank(ball.address(v)) != 0;
        const T step = val[v] - val[ball.parent(v)];
        val[ch[0]] = val[v] + (sw ? f1 : f0) * step;
        val[ch[1]] = val[v] + (sw ? f0 : f1) * step;
    }
    return val;
}

inline ComplexFunction to_function(const TreeBall& ball, const std::vector<cplx>& vals) {
    return ComplexFunction(ball.graph(), vals, ball.boundary());
}

inline ComplexFunction to_function(const TreeBall& ball, const std::vector<EisensteinNumber>& vals) {
    std::vector<cplx> z;
    for (const auto& e : vals) z.push_back(e.to_complex());
    return ComplexFunction(ball.graph(), z, ball.boundary());
}

inline ComplexFunction extend_rooted(cplx alpha, cplx beta, std::size_t radius, const ChoiceAssignment& choices) {
    auto ball = TreeBall::rooted(2, radius);
    return to_function(ball, extend_values(ball, alpha, beta, choices));
}

inline ComplexFunction extend_full(cplx alpha, cplx beta, std::size_t radius, const ChoiceAssignment& choices) {
    auto ball = TreeBall::full(2, radius);
    return to_function(ball, extend_values(ball, alpha, beta, choices));
}

/// w + a0 w + (a1 a0) w + ... + (a_{n-1}...a0) w: the value at depth n of a
/// geodesic leaving the root edge, with phi(O') = 0 and phi(O) = w.
template <class T>
T chain_eval(const T& w, const std::vector<T>& factors) {
    T sum = w, term = w;
    for (const T& a : factors) {
        term = a * term;
        sum = sum + term;
    }
    return sum;
}

inline ComplexFunction canonical_phi(cplx alpha, cplx beta, std::size_t radius, bool full = false) {
    if (alpha == beta) throw input_error("canonical extension needs distinct root values");
    auto ball = full ? TreeBall::full(2, radius) : TreeBall::rooted(2, radius);
    return to_function(ball, extend_values(ball, alpha, beta, ChoiceAssignment::constant(ball)));
}

inline std::vector<EisensteinNumber> canonical_phi_exact(const TreeBall& ball, const EisensteinNumber& alpha,
                                                         const EisensteinNumber& beta) {
    if (alpha == beta) throw input_error("canonical extension needs distinct root values");
    return extend_values(ball, alpha, beta, ChoiceAssignment::constant(ball));
}

/// Number of holomorphic extensions on the rooted ball: 2^(number of branch points).
inline double holomorphic_count(std::size_t radius) { return std::pow(2.0, std::pow(2.0, static_cast<double>(radius)) - 1.0); }

/// One function per choice assignment on the rooted ball, in bit order.
inline std::vector<ComplexFunction> enumerate_holomorphic(cplx alpha, cplx beta, std::size_t radius,
                                                          std::size_t cap = std::size_t{1} << 16) {
    if (alpha == beta) throw input_error("enumeration needs distinct root values");
    const double count = holomorphic_count(radius);
    if (count > static_cast<double>(cap))
        throw resource_cap_error("radius " + std::to_string(radius) + " has " + std::to_string(count) +
                                 " extensions, cap is " + std::to_string(cap));
    auto ball = TreeBall::rooted(2, radius);
    std::vector<ComplexFunction> out;
    const auto n = static_cast<std::uint64_t>(count);
    for (std::uint64_t bits = 0; bits < n; ++bits)
        out.push_back(to_function(ball, extend_values(ball, alpha, beta, ChoiceAssignment::from_bits(ball, bits))));
    return out;
}

/// Distinct values on every closed radius-1 ball around an interior vertex.
inline bool is_locally_injective(const ComplexFunction& f, double tol = 1e-9) {
    for (Vertex v : f.interior()) {
        std::vector<cplx> vals{f.value(v)};
        for (Vertex w : f.graph().neighbors(v)) vals.push_back(f.value(w));
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t k = i + 1; k < vals.size(); ++k)
                if (std::abs(vals[i] - vals[k]) <= tol) return false;
    }
    return true;
}

/// Interior oscillations are e{1, j, j^2}: equal moduli, pairwise angles 2pi/3.
inline bool is_conformal(const ComplexFunction& f, double tol = 1e-9) {
    for (Vertex v : f.interior()) {
        auto d = oscillation(f, v).entries;
        if (d.size() != 3) return false;
        const double s = std::abs(d[0]);
        if (s <= tol) return false;
        for (std::size_t k = 1; k < 3; ++k) {
            const cplx q = d[k] / d[0];
            if (std::min(std::abs(q - kJ), std::abs(q - kJ2)) > tol) return false;
        }
    }
    return true;
}

/// With the cyclic order (parent, a, b) at each vertex, the image turns the
/// same way: delta_a = j * delta_parent at every branch point.
inline bool is_orientation_preserving(const TreeBall& ball, const std::vector<cplx>& vals, double tol = 1e-9) {
    for (Vertex v : ball.branch_points()) {
        const cplx dp = vals[ball.parent(v)] - vals[v];
        const cplx da = vals[ball.children(v)[0]] - vals[v];
        if (std::abs(da - kJ * dp) > tol * (1.0 + std::abs(dp))) return false;
    }
    return true;
}

struct CoveringReport {
    bool in_lattice = false;
    bool locally_surjective = false;
    /// Largest rho such that every tiling vertex within rho edges of phi(O') is attained.
    std::size_t covered_radius = 0;
    /// rho(R) >= R is expected for full balls, since every non-backtracking tiling path lifts.
    bool covers_expected_radius = false;
    std::size_t off_lattice = 0;
    std::optional<std::string> first_failure;

    [[nodiscard]] bool ok() const { return in_lattice && locally_surjective && covers_expected_radius; }
};

/// Checks an extension normalised to phi(O') = 0, phi(O) = 1 against tau_{0,1}:
/// (i) image in the tiling, (ii) the oscillations at each interior vertex are
/// the tiling edges at its image, (iii) the image covers a tiling ball.
inline CoveringReport hex_covering_check(const TreeBall& ball, const std::vector<EisensteinNumber>& vals) {
    if (vals.size() != ball.size()) throw input_error("value count does not match the ball");
    if (!(vals[ball.back_root()] == EisensteinNumber{}) || !(vals[ball.root()] == EisensteinNumber(1, 0)))
        throw input_error("normalise the root edge to (0, 1) first (apply the similarity z -> (z - a)/(b - a))");
    HexLattice lattice({}, {1, 0}, ball.radius() + 2);
    CoveringReport rep;
    rep.in_lattice = true;
    for (Vertex v = 0; v < ball.size(); ++v)
        if (!lattice.contains(vals[v])) {
            rep.in_lattice = false;
            ++rep.off_lattice;
            if (!rep.first_failure) rep.first_failure = "value at " + ball.address(v).to_string() + " is off the tiling";
        }
    rep.locally_surjective = rep.in_lattice;
    if (rep.in_lattice) {
        for (Vertex v = 0; v < ball.size(); ++v) {
            if (ball.boundary()[v]) continue;
            std::vector<EisensteinNumber> osc, edges;
            for (Vertex w : ball.graph()->neighbors(v)) osc.push_back(vals[w] - vals[v]);
            for (const auto& e : lattice.edge_vectors(lattice.vertex_class(vals[v]))) edges.push_back(e);
            std::sort(osc.begin(), osc.end());
            std::sort(edges.begin(), edges.end());
            if (osc != edges) {
                rep.locally_surjective = false;
                if (!rep.first_failure) rep.first_failure = "oscillations at " + ball.address(v).to_string() + " miss the tiling edges";
                break;
            }
        }
    }
    std::set<EisensteinNumber> image(vals.begin(), vals.end());
    auto dist = lattice.ball(ball.radius() + 2);
    std::size_t first_missing = ball.radius() + 3;
    for (const auto& [z, d] : dist)
        if (!image.count(z)) first_missing = std::min(first_missing, d);
    rep.covered_radius = first_missing - 1;
    const std::size_t expected = ball.is_full() ? ball.radius() : 0;
    rep.covers_expected_radius = rep.covered_radius >= expected;
    return rep;
}

inline CoveringReport hex_covering_check(const TreeBall& ball, const ComplexFunction& f, double tol = 1e-9) {
    std::vector<EisensteinNumber> exact;
    CoveringReport bad;
    for (Vertex v = 0; v < ball.size(); ++v) {
        auto e = EisensteinNumber::snap(f.value(v), tol);
        if (!e) {
            if (v == ball.root() || v == ball.back_root())
                throw input_error("normalise the root edge to (0, 1) first (apply the similarity z -> (z - a)/(b - a))");
            bad.first_failure = "value at " + ball.address(v).to_string() + " is off the tiling";
            ++bad.off_lattice;
            continue;
        }
        exact.push_back(*e);
    }
    if (bad.off_lattice) return bad;
    return hex_covering_check(ball, exact);
}

/// Outgoing oscillations at a vertex of T_{N+1} whose oscillation towards its
/// parent is d: the N other roots of the power-sum system of order N, ordered
/// by the argument of delta/d in [0, 2 pi). For N = 2 this is (j d, j^2 d).
inline std::vector<cplx> nholo_outgoing(cplx d, int order, const MomentOptions& opt = {}) {
    if (order < 2) throw input_error("N-holomorphic extension needs N >= 2");
    const auto n = static_cast<std::size_t>(order);
    if (d == cplx{}) return std::vector<cplx>(n, cplx{});
    auto sol = solve_power_sums({{d}, n, order}, opt);
    if (sol.kind != SolutionSet::Kind::unique_up_to_permutation) throw numerical_failure("power-sum system has no tripod solution");
    auto phase = [d](cplx x) {
        double a = std::arg(x / d);
        return a < 0 ? a + 2.0 * std::numbers::pi : a;
    };
    std::sort(sol.roots.begin(), sol.roots.end(), [&](cplx x, cplx y) { return phase(x) < phase(y); });
    return sol.roots;
}

/// N-holomorphic extension on the rooted ball of T_{N+1}: child slot c of S gets
/// the outgoing oscillation number perm(c) of nholo_outgoing.
inline ComplexFunction nholo_extend(int order, cplx alpha, cplx beta, std::size_t radius,
                                    const std::optional<ChoiceAssignment>& choices = std::nullopt) {
    if (order < 2) throw input_error("N-holomorphic extension needs N >= 2");
    auto ball = TreeBall::rooted(static_cast<std::size_t>(order), radius);
    const ChoiceAssignment ch = choices ? *choices : ChoiceAssignment::constant(ball);
    if (ch.branching() != ball.branching()) throw input_error("choice assignment has the wrong branching");
    std::vector<cplx> val(ball.size());
    val[ball.back_root()] = alpha;
    val[ball.root()] = beta;
    for (Vertex v = 0; v < ball.size(); ++v) {
        const auto& kids = ball.children(v);
        if (kids.empty()) continue;
        const auto out = nholo_outgoing(val[ball.parent(v)] - val[v], order);
        const auto perm = ch.permutation(ball.address(v));
        for (std::size_t c = 0; c < kids.size(); ++c) val[kids[c]] = val[v] + out[perm[c]];
    }
    return to_function(ball, val);
}

/// Solves (*)_N vertex by vertex on the rooted ball of the tree of the given
/// valency, starting from the root edge. Returns nothing when some vertex has
/// no solution; the returned function uses the default choices of
/// solve_power_sums (and zeros for free unknowns).
inline std::optional<ComplexFunction> solve_n_holomorphic_on_tree(std::size_t valency, int order, cplx alpha, cplx beta,
                                                                  std::size_t radius, const MomentOptions& opt = {}) {
    if (valency < 2) throw input_error("tree valency must be >= 2");
    auto ball = TreeBall::rooted(valency - 1, radius);
    std::vector<cplx> val(ball.size());
    val[ball.back_root()] = alpha;
    val[ball.root()] = beta;
    for (Vertex v = 0; v < ball.size(); ++v) {
        const auto& kids = ball.children(v);
        if (kids.empty()) continue;
        auto sol = solve_power_sums({{val[ball.parent(v)] - val[v]}, kids.size(), order}, opt);
        if (!sol.feasible()) return std::nullopt;
        for (std::size_t c = 0; c < kids.size(); ++c) val[kids[c]] = val[v] + sol.roots[c];
    }
    return to_function(ball, val);
}

}  // namespace dholo

#endif  // DHOLO_T3_HPP
