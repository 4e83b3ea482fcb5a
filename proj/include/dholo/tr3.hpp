#ifndef DHOLO_TR3_HPP
#define DHOLO_TR3_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "harmonic.hpp"
#include "moments.hpp"
#include "roots.hpp"

namespace dholo {

/// Triangle (l, i) of Tr3: direction i in {1, 2, 3} and a word l over {a, b};
/// children are (a l, i) and (b l, i). The central triangle has i = 0.
struct TriangleCode {
    int direction = 0;
    std::string word;

    [[nodiscard]] bool central() const { return direction == 0; }
    [[nodiscard]] std::size_t depth() const { return central() ? 0 : word.size() + 1; }
    [[nodiscard]] std::string to_string() const {
        return central() ? std::string("D0") : "(" + (word.empty() ? std::string("-") : word) + "," + std::to_string(direction) + ")";
    }
    auto operator<=>(const TriangleCode&) const = default;
};

/// Finite ball of Tr3: all triangles of depth <= radius.
///
/// Vertex "i:l" is the vertex shared by triangle (l, i) and its parent; the
/// central triangle has vertices "1:", "2:", "3:". Triangle (l, i) has
/// vertices i:l (its mark), i:al and i:bl. Vertices only reached by
/// triangles outside the ball are boundary.
class Tr3Ball {
public:
    static constexpr std::size_t max_radius = 18;

    explicit Tr3Ball(std::size_t radius) : r_(radius) {
        if (radius > max_radius) throw resource_cap_error("Tr3 ball radius " + std::to_string(radius) + " exceeds cap " + std::to_string(max_radius));
        for (int i = 1; i <= 3; ++i) add_vertex(i, "", 1);
        triangles_.push_back({{0, ""}, {0, 1, 2}});
        std::vector<std::pair<Vertex, Vertex>> edges{{0, 1}, {1, 2}, {0, 2}};
        std::vector<std::size_t> frontier;
        for (int i = 1; i <= 3; ++i) {
            if (r_ == 0) break;
            frontier.push_back(add_triangle({i, ""}, static_cast<Vertex>(i - 1), edges));
        }
        for (std::size_t d = 2; d <= r_; ++d) {
            std::vector<std::size_t> next;
            for (std::size_t t : frontier) {
                const auto code = triangles_[t].code;
                for (char c : {'a', 'b'}) {
                    const TriangleCode child{code.direction, std::string(1, c) + code.word};
                    next.push_back(add_triangle(child, triangles_[t].vertices[c == 'a' ? 1 : 2], edges));
                }
            }
            frontier = std::move(next);
        }
        std::vector<std::string> ids;
        for (const auto& [dir, word] : vkey_) ids.push_back(std::to_string(dir) + ":" + word);
        graph_ = make_graph(std::move(ids), edges);
    }

    struct Triangle {
        TriangleCode code;
        /// mark first, then the vertices leading to the a- and b-children
        std::array<Vertex, 3> vertices;
    };

    [[nodiscard]] std::size_t radius() const { return r_; }
    [[nodiscard]] const GraphPtr& graph() const { return graph_; }
    [[nodiscard]] std::size_t size() const { return vkey_.size(); }
    [[nodiscard]] const std::vector<Triangle>& triangles() const { return triangles_; }
    [[nodiscard]] const std::vector<bool>& boundary() const { return boundary_; }
    [[nodiscard]] std::size_t vertex_depth(Vertex v) const { return vkey_.at(v).second.size(); }
    [[nodiscard]] std::size_t triangle_index(const TriangleCode& c) const {
        auto it = tindex_.find(c);
        if (it == tindex_.end()) throw input_error("triangle " + c.to_string() + " is not in the ball");
        return it->second;
    }
    /// Parent triangle index (none for the central triangle).
    [[nodiscard]] std::optional<std::size_t> parent(std::size_t t) const {
        const auto& c = triangles_.at(t).code;
        if (c.central()) return std::nullopt;
        if (c.word.empty()) return 0;
        return triangle_index({c.direction, c.word.substr(1)});
    }
    /// Triangles carrying a selector: every triangle but the central one.
    [[nodiscard]] std::size_t selector_count() const { return triangles_.size() - 1; }

private:
    Vertex add_vertex(int dir, const std::string& word, std::size_t depth) {
        const Vertex v = vkey_.size();
        vkey_.emplace_back(dir, word);
        boundary_.push_back(depth > r_);
        return v;
    }

    std::size_t add_triangle(const TriangleCode& code, Vertex mark, std::vector<std::pair<Vertex, Vertex>>& edges) {
        const std::size_t d = code.depth();
        const Vertex a = add_vertex(code.direction, "a" + code.word, d + 1);
        const Vertex b = add_vertex(code.direction, "b" + code.word, d + 1);
        edges.emplace_back(mark, a);
        edges.emplace_back(mark, b);
        edges.emplace_back(a, b);
        tindex_.emplace(code, triangles_.size());
        triangles_.push_back({code, {mark, a, b}});
        return triangles_.size() - 1;
    }

    std::size_t r_;
    std::vector<std::pair<int, std::string>> vkey_;
    std::vector<bool> boundary_;
    std::vector<Triangle> triangles_;
    std::map<TriangleCode, std::size_t> tindex_;
    GraphPtr graph_;
};

/// State (p, e, f): value at the marked vertex and the two oscillations from it.
struct MarkedTriangle {
    cplx p, e, f;
};

/// The two-valued triangle map, branch by the principal root s of
/// D = -3(e^2+f^2) - 2ef: branch 1 is ((2p+(e+f)-s)/2, ((e+f)-s)/2, -s),
/// branch 2 the same with +s.
inline MarkedTriangle step_M(const MarkedTriangle& t, int branch) {
    if (branch != 1 && branch != 2) throw input_error("branch must be 1 or 2");
    cplx d = pair2_discriminant(t.e, t.f);
    d = {d.real(), d.imag() + 0.0};  // -0 imaginary part would flip the principal root
    const cplx s = (branch == 1 ? 1.0 : -1.0) * std::sqrt(d);
    const cplx sum = t.e + t.f;
    return {(2.0 * t.p + sum - s) / 2.0, (sum - s) / 2.0, -s};
}

/// The new oscillations (u, v) of a step_M output: u = -e', v = f' - e'.
inline UnorderedPair step_M_pair(const MarkedTriangle& out) { return {-out.e, out.f - out.e}; }

struct CorrespondencePoint {
    cplx p, e, f, x, y, z;
};

/// e+f-y+(-y+z), e^2+f^2+y^2+(-y+z)^2, x-(p+y).
inline std::array<cplx, 3> correspondence_residual(const CorrespondencePoint& c) {
    const cplx w = -c.y + c.z;
    return {c.e + c.f - c.y + w, c.e * c.e + c.f * c.f + c.y * c.y + w * w, c.x - (c.p + c.y)};
}

inline CorrespondencePoint correspondence_point(const MarkedTriangle& in, const MarkedTriangle& out) {
    return {in.p, in.e, in.f, out.p, out.e, out.f};
}

inline bool involution_check(cplx e, cplx f, double tol = 1e-9) {
    auto uv = solve_pair2(e, f);
    auto back = solve_pair2(uv.first, uv.second);
    const double scale = 1.0 + std::abs(e) + std::abs(f);
    return pair_distance(back, {e, f}) <= tol * scale;
}

/// |D| / (|e|^2 + |f|^2); zero exactly on the two singular lines.
inline double singular_locus_distance(cplx e, cplx f) {
    const double n2 = std::norm(e) + std::norm(f);
    if (n2 == 0.0) throw input_error("singular locus distance is undefined at (0, 0)");
    return std::abs(pair2_discriminant(e, f)) / n2;
}

/// The singular classes e/f = (-1 -+ 2 i sqrt 2)/3 (S from (1-i sqrt2, 1+i sqrt2), N its mirror).
inline std::array<cplx, 2> singular_ratios() {
    const double r = 2.0 * std::sqrt(2.0) / 3.0;
    return {cplx(-1.0 / 3.0, -r), cplx(-1.0 / 3.0, r)};
}

enum class Monodromy { identity, transposition };

/// Continues the roots of solve_pair2(zeta(t), 1) around the closed loop
/// zeta(t), t = 0..steps (zeta(steps) = zeta(0)) by nearest matching.
template <class Loop>
Monodromy branch_monodromy(Loop&& zeta, std::size_t steps) {
    if (steps < 3) throw input_error("monodromy loop needs at least 3 steps");
    auto roots = [](cplx z) {
        auto p = solve_pair2(z, 1.0);
        return std::array<cplx, 2>{p.first, p.second};
    };
    const auto start = roots(zeta(0));
    if (std::abs(start[0] - start[1]) < 1e-12) throw input_error("loop starts on the singular locus");
    auto cur = start;
    for (std::size_t k = 1; k <= steps; ++k) {
        auto next = roots(zeta(k));
        const double keep = std::abs(next[0] - cur[0]) + std::abs(next[1] - cur[1]);
        const double swap = std::abs(next[1] - cur[0]) + std::abs(next[0] - cur[1]);
        if (swap < keep) std::swap(next[0], next[1]);
        const double sep = std::abs(next[0] - next[1]);
        const double moved = std::max(std::abs(next[0] - cur[0]), std::abs(next[1] - cur[1]));
        if (!(moved < 0.25 * sep))
            throw numerical_failure("ambiguous root matching at step " + std::to_string(k) + "; use more steps or keep the loop off the singular points");
        cur = next;
    }
    if (std::abs(cur[0] - start[0]) < std::abs(cur[0] - start[1])) return Monodromy::identity;
    return Monodromy::transposition;
}

/// Circle loop |zeta - centre| = radius in the chart [zeta : 1].
inline Monodromy branch_monodromy_circle(cplx centre, double radius, std::size_t steps) {
    return branch_monodromy(
        [&](std::size_t k) { return centre + std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k % steps) / static_cast<double>(steps)); },
        steps);
}

/// Per non-central triangle: false sends the a-child vertex the branch-1 root, true swaps.
class BranchSelector {
public:
    void set(const TriangleCode& c, bool swapped) { sel_[c] = swapped; }
    [[nodiscard]] bool swapped(const TriangleCode& c) const {
        auto it = sel_.find(c);
        if (it == sel_.end()) throw input_error("no branch selected for triangle " + c.to_string());
        return it->second;
    }
    [[nodiscard]] std::size_t size() const { return sel_.size(); }

    static BranchSelector constant(const Tr3Ball& ball, bool swapped = false) {
        BranchSelector s;
        for (const auto& t : ball.triangles())
            if (!t.code.central()) s.set(t.code, swapped);
        return s;
    }
    /// Bit k for the k-th non-central triangle in ball order.
    static BranchSelector from_bits(const Tr3Ball& ball, std::uint64_t bits) {
        BranchSelector s;
        std::size_t k = 0;
        for (const auto& t : ball.triangles())
            if (!t.code.central()) s.set(t.code, (bits >> k++) & 1U);
        return s;
    }
    static BranchSelector random(const Tr3Ball& ball, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        BranchSelector s;
        for (const auto& t : ball.triangles())
            if (!t.code.central()) s.set(t.code, rng() & 1U);
        return s;
    }

private:
    std::map<TriangleCode, bool> sel_;
};

namespace detail {

// Values at the a- and b-vertices of a triangle whose mark O has value p and
// whose parent triangle is (O, A, B) with oscillations e, f from O. The
// marked data of the new triangle at its a-vertex C is (phi(C), phi(O) - phi(C),
// phi(D) - phi(C)), and phi(C) = p + u.
inline std::pair<cplx, cplx> tr3_children(cplx p, cplx e, cplx f, bool swapped) {
    const MarkedTriangle t{p, e, f};
    const auto u = step_M_pair(step_M(t, swapped ? 2 : 1)).first;
    const auto v = step_M_pair(step_M(t, swapped ? 1 : 2)).first;
    return {p + u, p + v};
}

}  // namespace detail

/// Extends triangle data on the central triangle (values p, p+e, p+f at
/// vertices 1, 2, 3) over the Tr3 ball, triangle by triangle.
inline ComplexFunction extend_tr3(const MarkedTriangle& start, const Tr3Ball& ball, const BranchSelector& selector) {
    std::vector<cplx> val(ball.size());
    val[0] = start.p;
    val[1] = start.p + start.e;
    val[2] = start.p + start.f;
    const auto& tris = ball.triangles();
    for (std::size_t t = 1; t < tris.size(); ++t) {
        const auto& tri = tris[t];
        const auto& par = tris[*ball.parent(t)];
        const Vertex o = tri.vertices[0];
        std::array<Vertex, 2> others{};
        std::size_t k = 0;
        for (Vertex w : par.vertices)
            if (w != o) others[k++] = w;
        const cplx p = val[o];
        auto [c, d] = detail::tr3_children(p, val[others[0]] - p, val[others[1]] - p, selector.swapped(tri.code));
        val[tri.vertices[1]] = c;
        val[tri.vertices[2]] = d;
    }
    return ComplexFunction(ball.graph(), val, ball.boundary());
}

inline ComplexFunction extend_tr3(const MarkedTriangle& start, std::size_t radius, const BranchSelector& selector) {
    return extend_tr3(start, Tr3Ball(radius), selector);
}

/// Canonical representative of a class [e : f]: unit norm, the larger
/// coordinate real and positive.
struct ProjectivePoint {
    cplx e, f;

    static ProjectivePoint of(cplx e, cplx f) {
        const double n = std::sqrt(std::norm(e) + std::norm(f));
        if (n == 0.0) throw input_error("[0 : 0] is not a projective point");
        const cplx big = std::abs(e) >= std::abs(f) ? e : f;
        const cplx phase = std::conj(big) / std::abs(big);
        return {e * phase / n, f * phase / n};
    }
    /// Affine coordinate e/f (infinite at [1 : 0]).
    [[nodiscard]] cplx ratio() const { return e / f; }
};

/// Fubini-Study chordal distance between classes.
inline double chordal_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
    const double na = std::sqrt(std::norm(a.e) + std::norm(a.f)), nb = std::sqrt(std::norm(b.e) + std::norm(b.f));
    return std::abs(a.e * b.f - a.f * b.e) / (na * nb);
}

inline ProjectivePoint projective_step(const ProjectivePoint& c, int branch) {
    const auto rep = ProjectivePoint::of(c.e, c.f);
    const auto out = step_M({0.0, rep.e, rep.f}, branch);
    return ProjectivePoint::of(out.e, out.f);
}

struct FixedPoint {
    ProjectivePoint point;
    int branch = 1;
    double defect = 0.0;
};

/// Fixed classes of either branch, by sampling the chart [zeta : 1] on a grid
/// and refining with complex Newton steps on zeta' - zeta.
inline std::vector<FixedPoint> find_fixed_points(double tol = 1e-10, std::size_t grid = 64, double extent = 3.0) {
    std::vector<FixedPoint> out;
    // Newton on [z : 1] with the square root continued analytically from the
    // previous iterate; the principal cut would otherwise stall it.
    auto ratio = [](cplx z, cplx s) {
        const cplx sum = z + 1.0;
        return ((sum - s) / 2.0) / (-s) - z;
    };
    auto root_near = [](cplx z, cplx ref) {
        const cplx s = std::sqrt(pair2_discriminant(z, 1.0));
        return std::abs(s - ref) <= std::abs(s + ref) ? s : -s;
    };
    for (int sign : {1, -1})
        for (std::size_t a = 0; a < grid; ++a)
            for (std::size_t b = 0; b < grid; ++b) {
                cplx z(-extent + 2.0 * extent * (static_cast<double>(a) + 0.5) / static_cast<double>(grid),
                       -extent + 2.0 * extent * (static_cast<double>(b) + 0.5) / static_cast<double>(grid));
                cplx s = static_cast<double>(sign) * std::sqrt(pair2_discriminant(z, 1.0));
                bool ok = false;
                for (int it = 0; it < 80; ++it) {
                    const cplx hz = ratio(z, s);
                    if (!std::isfinite(hz.real()) || !std::isfinite(hz.imag())) break;
                    if (std::abs(hz) < tol) {
                        ok = true;
                        break;
                    }
                    const double eps = 1e-7 * (1.0 + std::abs(z));
                    const cplx d = (ratio(z + eps, root_near(z + eps, s)) - hz) / eps;
                    if (std::abs(d) == 0.0) break;
                    z -= hz / d;
                    s = root_near(z, s);
                }
                if (!ok) continue;
                const auto pt = ProjectivePoint::of(z, 1.0);
                int branch = 1;
                double defect = chordal_distance(projective_step(pt, 1), pt);
                if (const double d2 = chordal_distance(projective_step(pt, 2), pt); d2 < defect) {
                    branch = 2;
                    defect = d2;
                }
                if (defect > 1e-9) continue;
                bool seen = false;
                for (const auto& f : out) seen = seen || chordal_distance(f.point, pt) < 1e-7;
                if (!seen) out.push_back({pt, branch, defect});
            }
    return out;
}

struct CloudPoint {
    cplx z;
    std::size_t depth = 0;
};

/// Every value any extension can take on the Tr3 ball: values at a triangle's
/// new vertices depend only on the selectors along its path, so the states are
/// enumerated per path instead of per selector.
inline std::vector<CloudPoint> ball_image_cloud_exhaustive(const MarkedTriangle& start, std::size_t radius,
                                                           std::size_t max_points = 20'000'000) {
    // states of a triangle: (value at mark, at a-vertex, at b-vertex)
    double total = 3.0;
    for (std::size_t d = 1; d <= radius; ++d) total += 3.0 * std::pow(2.0, static_cast<double>(2 * d));
    if (total > static_cast<double>(max_points))
        throw resource_cap_error("exhaustive cloud would hold about " + std::to_string(total) + " points");
    std::vector<CloudPoint> out{{start.p, 0}, {start.p + start.e, 0}, {start.p + start.f, 0}};
    struct State {
        cplx mark, a, b;
    };
    const std::array<cplx, 3> centre{start.p, start.p + start.e, start.p + start.f};
    for (int i = 0; i < 3; ++i) {
        // first ring: the parent of (-, i) is the central triangle with mark at vertex i
        const cplx p = centre[static_cast<std::size_t>(i)];
        const cplx e = centre[static_cast<std::size_t>((i + 1) % 3)] - p, f = centre[static_cast<std::size_t>((i + 2) % 3)] - p;
        std::vector<State> level;
        for (bool sw : {false, true}) {
            auto [c, d] = detail::tr3_children(p, e, f, sw);
            level.push_back({p, c, d});
        }
        for (std::size_t depth = 1; depth <= radius; ++depth) {
            for (const auto& s : level) {
                out.push_back({s.a, depth});
                out.push_back({s.b, depth});
            }
            if (depth == radius) break;
            std::vector<State> next;
            for (const auto& s : level)
                for (int side = 0; side < 2; ++side) {
                    const cplx m = side == 0 ? s.a : s.b, other = side == 0 ? s.b : s.a;
                    for (bool sw : {false, true}) {
                        auto [c, d] = detail::tr3_children(m, s.mark - m, other - m, sw);
                        next.push_back({m, c, d});
                    }
                }
            level = std::move(next);
        }
    }
    return out;
}

/// Vertex values of `samples` extensions with seeded random selectors.
inline std::vector<CloudPoint> ball_image_cloud_sampled(const MarkedTriangle& start, std::size_t radius, std::size_t samples,
                                                        std::uint64_t seed) {
    Tr3Ball ball(radius);
    if (static_cast<double>(samples) * static_cast<double>(ball.size()) > 5e7)
        throw resource_cap_error("sampled cloud too large");
    std::mt19937_64 rng(seed);
    std::vector<CloudPoint> out;
    for (std::size_t s = 0; s < samples; ++s) {
        auto f = extend_tr3(start, ball, BranchSelector::random(ball, rng()));
        for (Vertex v = 0; v < ball.size(); ++v) out.push_back({f.value(v), ball.vertex_depth(v)});
    }
    return out;
}

/// Marked data of triangle t under f: value at its mark and oscillations to its a- and b-vertices.
inline MarkedTriangle marked_data(const Tr3Ball& ball, const ComplexFunction& f, std::size_t t) {
    const auto& v = ball.triangles().at(t).vertices;
    const cplx p = f.value(v[0]);
    return {p, f.value(v[1]) - p, f.value(v[2]) - p};
}

/// Pairs of related triangle states: two triangles read off one random extension.
inline std::vector<std::pair<MarkedTriangle, MarkedTriangle>> sample_related_pairs(const MarkedTriangle& start, std::size_t radius,
                                                                                    std::size_t count, std::uint64_t seed) {
    Tr3Ball ball(radius);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, ball.triangles().size() - 1);
    std::vector<std::pair<MarkedTriangle, MarkedTriangle>> out;
    for (std::size_t k = 0; k < count; ++k) {
        auto f = extend_tr3(start, ball, BranchSelector::random(ball, rng()));
        out.emplace_back(marked_data(ball, f, pick(rng)), marked_data(ball, f, pick(rng)));
    }
    return out;
}

}  // namespace dholo

#endif  // DHOLO_TR3_HPP
