#ifndef DHOLO_GRAPH_HPP
#define DHOLO_GRAPH_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "core.hpp"

namespace dholo {

using Vertex = std::size_t;

/// Finite, simple, undirected, connected graph with string vertex ids.
///
/// Neighbour order is the insertion order of the edges. It is kept so that
/// oscillation vectors are reproducible, but nothing in the library gives it
/// a meaning: every predicate is invariant under permuting it.
class Graph {
public:
    Graph(std::vector<std::string> ids, const std::vector<std::pair<Vertex, Vertex>>& edges)
        : ids_(std::move(ids)), adj_(ids_.size()) {
        if (ids_.empty()) throw input_error("graph has no vertices");
        for (Vertex v = 0; v < ids_.size(); ++v) {
            if (!index_.emplace(ids_[v], v).second)
                throw input_error("duplicate vertex id '" + ids_[v] + "'");
        }
        std::set<std::pair<Vertex, Vertex>> seen;
        for (auto [u, v] : edges) {
            if (u >= ids_.size() || v >= ids_.size()) throw input_error("edge endpoint out of range");
            if (u == v) throw input_error("self-loop at '" + ids_[u] + "'");
            if (!seen.emplace(std::min(u, v), std::max(u, v)).second)
                throw input_error("duplicate edge '" + ids_[u] + "'-'" + ids_[v] + "'");
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        edge_count_ = seen.size();
        if (!connected()) throw input_error("graph is disconnected");
    }

    static Graph from_ids(std::vector<std::string> ids,
                          const std::vector<std::pair<std::string, std::string>>& edges) {
        std::unordered_map<std::string, Vertex> idx;
        for (Vertex v = 0; v < ids.size(); ++v) idx.emplace(ids[v], v);
        std::vector<std::pair<Vertex, Vertex>> e;
        e.reserve(edges.size());
        for (const auto& [a, b] : edges) {
            auto ia = idx.find(a);
            auto ib = idx.find(b);
            if (ia == idx.end()) throw input_error("edge references unknown vertex '" + a + "'");
            if (ib == idx.end()) throw input_error("edge references unknown vertex '" + b + "'");
            e.emplace_back(ia->second, ib->second);
        }
        return Graph(std::move(ids), e);
    }

    [[nodiscard]] std::size_t size() const { return ids_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return edge_count_; }
    [[nodiscard]] const std::string& id(Vertex v) const { return ids_.at(v); }
    [[nodiscard]] const std::vector<std::string>& ids() const { return ids_; }

    [[nodiscard]] std::optional<Vertex> find(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    [[nodiscard]] Vertex index(const std::string& id) const {
        auto v = find(id);
        if (!v) throw input_error("unknown vertex '" + id + "'");
        return *v;
    }

    [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }
    [[nodiscard]] std::size_t valency(Vertex v) const { return adj_.at(v).size(); }
    [[nodiscard]] bool adjacent(Vertex u, Vertex v) const {
        const auto& a = adj_.at(u);
        return std::find(a.begin(), a.end(), v) != a.end();
    }

    [[nodiscard]] std::vector<std::pair<Vertex, Vertex>> edges() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        out.reserve(edge_count_);
        for (Vertex u = 0; u < adj_.size(); ++u)
            for (Vertex v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    /// First Betti number |E| - |V| + 1.
    [[nodiscard]] std::size_t cycle_rank() const { return edge_count_ + 1 - ids_.size(); }
    [[nodiscard]] bool is_tree() const { return cycle_rank() == 0; }

    /// Breadth-first distances from `source`.
    [[nodiscard]] std::vector<std::size_t> distances_from(Vertex source) const {
        std::vector<std::size_t> dist(size(), static_cast<std::size_t>(-1));
        std::queue<Vertex> q;
        dist[source] = 0;
        q.push(source);
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            for (Vertex w : adj_[u]) {
                if (dist[w] == static_cast<std::size_t>(-1)) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return dist;
    }

private:
    [[nodiscard]] bool connected() const {
        auto d = distances_from(0);
        return std::none_of(d.begin(), d.end(), [](std::size_t x) { return x == static_cast<std::size_t>(-1); });
    }

    std::vector<std::string> ids_;
    std::unordered_map<std::string, Vertex> index_;
    std::vector<std::vector<Vertex>> adj_;
    std::size_t edge_count_ = 0;
};

using GraphPtr = std::shared_ptr<const Graph>;

/// Values on (some of) the vertices of a graph.
///
/// A vertex is interior when it carries a value, all its neighbours carry
/// values, and it is not flagged as boundary. Finite balls flag their outer
/// sphere as boundary: those vertices have all in-graph neighbours valued but
/// are missing neighbours of the ambient infinite graph.
template <class T>
class VertexFunction {
public:
    VertexFunction(GraphPtr graph, std::vector<std::optional<T>> values, std::vector<bool> boundary = {})
        : graph_(std::move(graph)), values_(std::move(values)), boundary_(std::move(boundary)) {
        if (!graph_) throw input_error("vertex function without a graph");
        if (values_.size() != graph_->size()) throw input_error("value count does not match vertex count");
        if (boundary_.empty()) boundary_.assign(graph_->size(), false);
        if (boundary_.size() != graph_->size()) throw input_error("boundary mask size mismatch");
        interior_.assign(graph_->size(), false);
        for (Vertex v = 0; v < graph_->size(); ++v) {
            if (boundary_[v] || !values_[v]) continue;
            bool all = true;
            for (Vertex w : graph_->neighbors(v)) all = all && values_[w].has_value();
            interior_[v] = all;
        }
    }

    /// Fully specified function.
    VertexFunction(GraphPtr graph, const std::vector<T>& values, std::vector<bool> boundary = {})
        : VertexFunction(std::move(graph), wrap(values), std::move(boundary)) {}

    [[nodiscard]] const Graph& graph() const { return *graph_; }
    [[nodiscard]] const GraphPtr& graph_ptr() const { return graph_; }
    [[nodiscard]] bool has_value(Vertex v) const { return values_.at(v).has_value(); }
    [[nodiscard]] const T& value(Vertex v) const {
        const auto& x = values_.at(v);
        if (!x) throw missing_data_error("no value at vertex '" + graph_->id(v) + "'");
        return *x;
    }
    [[nodiscard]] const T& operator[](const std::string& id) const { return value(graph_->index(id)); }
    [[nodiscard]] bool is_interior(Vertex v) const { return interior_.at(v); }
    [[nodiscard]] bool is_boundary(Vertex v) const { return boundary_.at(v); }
    [[nodiscard]] const std::vector<bool>& boundary_mask() const { return boundary_; }
    [[nodiscard]] const std::vector<std::optional<T>>& values() const { return values_; }

    [[nodiscard]] std::vector<Vertex> interior() const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < interior_.size(); ++v)
            if (interior_[v]) out.push_back(v);
        return out;
    }

    /// Pointwise image under `fn`, keeping graph and boundary.
    template <class Fn>
    [[nodiscard]] auto map(Fn fn) const {
        using U = std::decay_t<decltype(fn(std::declval<const T&>()))>;
        std::vector<std::optional<U>> out(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i]) out[i] = fn(*values_[i]);
        return VertexFunction<U>(graph_, std::move(out), boundary_);
    }

private:
    static std::vector<std::optional<T>> wrap(const std::vector<T>& v) {
        return std::vector<std::optional<T>>(v.begin(), v.end());
    }

    GraphPtr graph_;
    std::vector<std::optional<T>> values_;
    std::vector<bool> boundary_;
    std::vector<bool> interior_;
};

using ComplexFunction = VertexFunction<cplx>;
using RealVertexFunction = VertexFunction<double>;

// ---------------------------------------------------------------------------
// Small graph builders used by tests, fixtures and the CLI.

inline GraphPtr make_graph(std::vector<std::string> ids, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    return std::make_shared<const Graph>(std::move(ids), edges);
}

inline std::vector<std::string> numbered_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    return ids;
}

inline GraphPtr path_graph(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return make_graph(numbered_ids(n), e);
}

/// Star with centre "c" and leaves "0".."k-1".
inline GraphPtr star_graph(std::size_t k) {
    std::vector<std::string> ids{"c"};
    std::vector<std::pair<Vertex, Vertex>> e;
    for (std::size_t i = 0; i < k; ++i) {
        ids.push_back(std::to_string(i));
        e.emplace_back(0, i + 1);
    }
    return make_graph(std::move(ids), e);
}

inline GraphPtr complete_graph(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex k = i + 1; k < n; ++k) e.emplace_back(i, k);
    return make_graph(numbered_ids(n), e);
}

/// The 3-cube Q3; vertex i is adjacent to i ^ (1 << b).
inline GraphPtr cube_graph() {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i < 8; ++i)
        for (int b = 0; b < 3; ++b) {
            Vertex k = i ^ (Vertex{1} << b);
            if (i < k) e.emplace_back(i, k);
        }
    return make_graph(numbered_ids(8), e);
}

inline GraphPtr petersen_graph() {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(i, i + 5);
        e.emplace_back(i + 5, (i + 2) % 5 + 5);
    }
    return make_graph(numbered_ids(10), e);
}

/// Square patch of the lattice Z + iZ with |Re|, |Im| <= half.
struct LatticePatch {
    GraphPtr graph;
    std::vector<cplx> position;
    std::vector<bool> boundary;
};

inline LatticePatch z2_patch(int half) {
    if (half < 1) throw input_error("z2 patch needs half-width >= 1");
    const int side = 2 * half + 1;
    auto at = [&](int x, int y) { return static_cast<Vertex>((y + half) * side + (x + half)); };
    std::vector<std::string> ids;
    std::vector<cplx> pos;
    std::vector<bool> boundary;
    std::vector<std::pair<Vertex, Vertex>> e;
    for (int y = -half; y <= half; ++y)
        for (int x = -half; x <= half; ++x) {
            ids.push_back(std::to_string(x) + "," + std::to_string(y));
            pos.emplace_back(x, y);
            boundary.push_back(std::abs(x) == half || std::abs(y) == half);
            if (x < half) e.emplace_back(at(x, y), at(x + 1, y));
            if (y < half) e.emplace_back(at(x, y), at(x, y + 1));
        }
    return {make_graph(std::move(ids), e), std::move(pos), std::move(boundary)};
}

/// Ball of radius `radius` around a vertex of the regular tree of valency k.
///
/// Ids: the centre is "o", a vertex is "o" followed by one child digit per
/// level (the centre has k children 0..k-1, every other vertex k-1 children).
struct TreeBallShape {
    GraphPtr graph;
    std::vector<std::size_t> depth;
    std::vector<std::optional<Vertex>> parent;
    std::vector<bool> boundary;  // the outer sphere
};

inline TreeBallShape regular_tree_ball(std::size_t valency, std::size_t radius) {
    if (valency < 2 || valency > 10) throw input_error("tree valency must be in [2, 10]");
    std::vector<std::string> ids{"o"};
    std::vector<std::size_t> depth{0};
    std::vector<std::optional<Vertex>> parent{std::nullopt};
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex v = 0; v < ids.size(); ++v) {
        if (depth[v] == radius) continue;
        const std::size_t kids = (v == 0) ? valency : valency - 1;
        for (std::size_t c = 0; c < kids; ++c) {
            Vertex w = ids.size();
            ids.push_back(ids[v] + static_cast<char>('0' + c));
            depth.push_back(depth[v] + 1);
            parent.emplace_back(v);
            e.emplace_back(v, w);
        }
    }
    std::vector<bool> boundary(ids.size());
    for (Vertex v = 0; v < ids.size(); ++v) boundary[v] = depth[v] == radius;
    return {make_graph(std::move(ids), e), std::move(depth), std::move(parent), std::move(boundary)};
}

/// Edge-adjacency graph: one vertex per edge, adjacent when edges share an endpoint.
inline GraphPtr line_graph(const Graph& g) {
    auto edges = g.edges();
    std::map<std::pair<Vertex, Vertex>, Vertex> index;
    std::vector<std::string> ids;
    for (Vertex i = 0; i < edges.size(); ++i) {
        index.emplace(edges[i], i);
        ids.push_back(g.id(edges[i].first) + "~" + g.id(edges[i].second));
    }
    auto key = [](Vertex a, Vertex b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    std::vector<std::pair<Vertex, Vertex>> e;
    for (Vertex x = 0; x < g.size(); ++x) {
        auto nb = g.neighbors(x);
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                e.emplace_back(index.at(key(x, nb[a])), index.at(key(x, nb[b])));
    }
    return make_graph(std::move(ids), e);
}

}  // namespace dholo

#endif  // DHOLO_GRAPH_HPP
