#ifndef DHOLO_HEX_LATTICE_HPP
#define DHOLO_HEX_LATTICE_HPP

#include <array>
#include <map>
#include <algorithm>
#include <queue>
#include <sstream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eisenstein.hpp"
#include "graph.hpp"

namespace dholo {

/// Vertices of the hexagonal tiling with vertex `alpha` and edge `w` through it.
///
/// Generated from the fundamental hexagon
///   alpha, alpha+w, alpha+w-jw, alpha+w-jw+j^2w, alpha-jw+j^2w, alpha+j^2w
/// by breadth-first reflection across edges, `cell_depth` generations deep.
/// Vertices come in two classes: at class 0 (e.g. alpha) the three edges are
/// w{1, j, j^2}, at class 1 they are -w{1, j, j^2}.
class HexLattice {
public:
    explicit HexLattice(EisensteinNumber alpha = {}, EisensteinNumber w = {1, 0}, std::size_t cell_depth = 8)
        : alpha_(alpha), w_(w), depth_(cell_depth) {
        if (w_.is_zero()) throw input_error("hexagonal tiling needs a nonzero edge");
        generate();
    }

    [[nodiscard]] const EisensteinNumber& alpha() const { return alpha_; }
    [[nodiscard]] const EisensteinNumber& edge() const { return w_; }
    [[nodiscard]] std::size_t cell_depth() const { return depth_; }

    [[nodiscard]] std::array<EisensteinNumber, 6> fundamental_hexagon() const {
        const auto j = EisensteinNumber::j();
        const auto j2 = EisensteinNumber::j2();
        std::array<EisensteinNumber, 6> h;
        h[0] = alpha_;
        h[1] = h[0] + w_;
        h[2] = h[1] - j * w_;
        h[3] = h[2] + j2 * w_;
        h[4] = h[3] - w_;
        h[5] = h[4] + j * w_;
        return h;
    }

    [[nodiscard]] bool contains(const EisensteinNumber& z) const { return cls_.count(z) != 0; }
    [[nodiscard]] std::size_t vertex_count() const { return cls_.size(); }
    [[nodiscard]] const std::map<EisensteinNumber, int>& vertices() const { return cls_; }
    [[nodiscard]] std::size_t cell_count() const { return cells_.size(); }
    /// Cell centres with their reflection generation.
    [[nodiscard]] const std::map<EisensteinNumber, std::size_t>& cells() const { return cells_; }

    [[nodiscard]] std::array<EisensteinNumber, 6> cell_vertices(const EisensteinNumber& centre) const {
        auto h = fundamental_hexagon();
        const EisensteinNumber shift = centre - centre0_;
        for (auto& v : h) v += shift;
        return h;
    }

    [[nodiscard]] int vertex_class(const EisensteinNumber& z) const {
        auto it = cls_.find(z);
        if (it == cls_.end()) throw input_error("point is not a generated tiling vertex");
        return it->second;
    }

    /// The three edge vectors leaving a vertex of the given class.
    [[nodiscard]] std::array<EisensteinNumber, 3> edge_vectors(int vertex_class) const {
        const EisensteinNumber s = (vertex_class == 0) ? w_ : -w_;
        return {s, EisensteinNumber::j() * s, EisensteinNumber::j2() * s};
    }

    [[nodiscard]] std::vector<EisensteinNumber> neighbours(const EisensteinNumber& z) const {
        std::vector<EisensteinNumber> out;
        for (const auto& d : edge_vectors(vertex_class(z))) out.push_back(z + d);
        return out;
    }

    /// Tiling graph distance from alpha for every vertex within `radius` edges.
    /// Exact as long as radius <= cell_depth.
    [[nodiscard]] std::map<EisensteinNumber, std::size_t> ball(std::size_t radius) const {
        if (radius > depth_) throw resource_cap_error("tiling ball radius exceeds the generated cell depth");
        std::map<EisensteinNumber, std::size_t> dist{{alpha_, 0}};
        std::queue<EisensteinNumber> q;
        q.push(alpha_);
        while (!q.empty()) {
            auto z = q.front();
            q.pop();
            const std::size_t d = dist.at(z);
            if (d == radius) continue;
            for (const auto& n : neighbours(z))
                if (dist.emplace(n, d + 1).second) q.push(n);
        }
        return dist;
    }

private:
    void generate() {
        const auto hex = fundamental_hexagon();
        // cell centre -> generation
        const EisensteinNumber six(6, 0);
        EisensteinNumber centre{};
        for (const auto& v : hex) centre += v;
        centre = centre / six;
        centre0_ = centre;
        std::queue<std::pair<EisensteinNumber, std::size_t>> q;
        cells_.emplace(centre, 0);
        q.emplace(centre, 0);
        while (!q.empty()) {
            auto [c, gen] = q.front();
            q.pop();
            // The reflection of a regular hexagon across an edge is its translate by
            // twice the centre-to-midpoint vector.
            const EisensteinNumber shift = c - centre;
            std::array<EisensteinNumber, 6> cell;
            for (int k = 0; k < 6; ++k) {
                cell[k] = hex[k] + shift;
                cls_.emplace(cell[k], k % 2);
            }
            if (gen == depth_) continue;
            for (int k = 0; k < 6; ++k) {
                const EisensteinNumber mid = (cell[k] + cell[(k + 1) % 6]) / EisensteinNumber(2, 0);
                const EisensteinNumber reflected = mid + mid - c;
                if (cells_.emplace(reflected, gen + 1).second) q.emplace(reflected, gen + 1);
            }
        }
    }

    EisensteinNumber alpha_;
    EisensteinNumber w_;
    std::size_t depth_;
    EisensteinNumber centre0_;
    std::map<EisensteinNumber, int> cls_;
    std::map<EisensteinNumber, std::size_t> cells_;
};

/// Graph ball of the tiling tau_{0,1} (exact positions), outer sphere flagged as boundary.
/// Vertex ids are "x,y" for x + y j.
struct HoneycombPatch {
    GraphPtr graph;
    std::vector<EisensteinNumber> exact;
    std::vector<cplx> position;
    std::vector<bool> boundary;
};

namespace detail {

// order: (key, point, is_boundary) sorted by key then point
inline HoneycombPatch assemble_patch(const HexLattice& lattice,
                                     std::vector<std::tuple<std::size_t, EisensteinNumber, bool>> order) {
    std::sort(order.begin(), order.end());
    std::vector<EisensteinNumber> pts;
    std::map<EisensteinNumber, Vertex> index;
    HoneycombPatch out;
    std::vector<std::string> ids;
    for (const auto& [key, z, bdry] : order) {
        index.emplace(z, pts.size());
        pts.push_back(z);
        std::ostringstream os;
        os << z.x().numerator() << ',' << z.y().numerator();
        ids.push_back(os.str());
        out.position.push_back(z.to_complex());
        out.boundary.push_back(bdry);
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex v = 0; v < pts.size(); ++v)
        for (const auto& n : lattice.neighbours(pts[v])) {
            auto it = index.find(n);
            if (it != index.end() && v < it->second) edges.emplace_back(v, it->second);
        }
    out.graph = make_graph(std::move(ids), edges);
    out.exact = std::move(pts);
    return out;
}

}  // namespace detail

inline HoneycombPatch honeycomb_ball(std::size_t radius) {
    HexLattice lattice({}, {1, 0}, radius);
    std::vector<std::tuple<std::size_t, EisensteinNumber, bool>> order;
    for (const auto& [z, d] : lattice.ball(radius)) order.emplace_back(d, z, d == radius);
    return detail::assemble_patch(lattice, std::move(order));
}

/// Union of the hexagons of tau_{0,1} up to `cell_depth` reflections from the
/// fundamental one, plus the pendant neighbours of their vertices. Every
/// vertex of a hexagon is trivalent; pendants are boundary.
inline HoneycombPatch hexagon_patch(std::size_t cell_depth) {
    HexLattice lattice({}, {1, 0}, cell_depth + 1);
    std::set<EisensteinNumber> core;
    for (const auto& [c, gen] : lattice.cells())
        if (gen <= cell_depth)
            for (const auto& v : lattice.cell_vertices(c)) core.insert(v);
    std::map<EisensteinNumber, bool> members;
    for (const auto& v : core) {
        members[v] = false;
        for (const auto& n : lattice.neighbours(v)) members.emplace(n, true);
    }
    std::vector<std::tuple<std::size_t, EisensteinNumber, bool>> order;
    for (const auto& [z, bdry] : members) {
        const Rational n = z.norm();
        order.emplace_back(static_cast<std::size_t>(n.numerator()), z, bdry);
    }
    return detail::assemble_patch(lattice, std::move(order));
}

}  // namespace dholo

#endif  // DHOLO_HEX_LATTICE_HPP
