#ifndef DHOLO_TRIVALENT_HPP
#define DHOLO_TRIVALENT_HPP

#include <optional>
#include <utility>
#include <vector>

#include "eisenstein.hpp"
#include "graph.hpp"

namespace dholo {

struct TrivalentOptions {
    std::size_t max_cycle_rank = 64;
    std::size_t max_search_nodes = 50'000'000;
    /// Edge pinned to the values (0, 1); defaults to the first edge at the first trivalent vertex.
    std::optional<std::pair<Vertex, Vertex>> pinned;
};

struct TrivalentResult {
    enum class Kind { constant_only, nonconstant_witness };
    Kind kind = Kind::constant_only;
    std::pair<Vertex, Vertex> pinned{};
    /// Exact witness values (pinned edge normalised to (0, 1)) when one exists.
    std::optional<std::vector<EisensteinNumber>> exact;
    std::optional<ComplexFunction> witness;
    std::size_t search_nodes = 0;

    [[nodiscard]] bool constant_only() const { return kind == Kind::constant_only; }
};

namespace detail {

class TrivalentSearch {
public:
    TrivalentSearch(const Graph& g, std::size_t node_cap) : g_(g), node_cap_(node_cap), value_(g.size()), closed_(g.size(), false) {}

    bool run(Vertex a, Vertex b) {
        value_[a] = EisensteinNumber(0, 0);
        value_[b] = EisensteinNumber(1, 0);
        return descend();
    }

    [[nodiscard]] std::vector<EisensteinNumber> values() const {
        std::vector<EisensteinNumber> out;
        for (const auto& v : value_) out.push_back(v.value_or(EisensteinNumber{}));
        return out;
    }
    [[nodiscard]] std::size_t nodes() const { return nodes_; }

private:
    // Next open trivalent vertex, preferring the most constrained one.
    std::optional<Vertex> pick() const {
        std::optional<Vertex> best;
        int best_known = 0;
        for (Vertex v = 0; v < g_.size(); ++v) {
            if (closed_[v] || g_.valency(v) != 3 || !value_[v]) continue;
            int known = 0;
            for (Vertex w : g_.neighbors(v)) known += value_[w] ? 1 : 0;
            if (known > best_known) {
                best_known = known;
                best = v;
                if (known == 3) break;
            }
        }
        return best;
    }

    bool descend() {
        if (++nodes_ > node_cap_) throw resource_cap_error("trivalent search exceeded its node budget");
        auto next = pick();
        if (!next) return true;
        const Vertex v = *next;
        const EisensteinNumber z = *value_[v];
        auto nb = g_.neighbors(v);

        std::vector<Vertex> unknown;
        std::vector<EisensteinNumber> osc;
        for (Vertex w : nb) {
            if (value_[w])
                osc.push_back(*value_[w] - z);
            else
                unknown.push_back(w);
        }
        closed_[v] = true;
        bool ok = false;
        if (unknown.empty()) {
            ok = holomorphic(osc[0], osc[1], osc[2]) && descend();
        } else if (unknown.size() == 1) {
            const EisensteinNumber third = -(osc[0] + osc[1]);
            if (holomorphic(osc[0], osc[1], third)) ok = try_assign({{unknown[0], z + third}});
        } else {
            // One known oscillation e: the other two are {je, j^2 e} up to the switch.
            const EisensteinNumber e = osc[0];
            const EisensteinNumber u = EisensteinNumber::j() * e;
            const EisensteinNumber w = EisensteinNumber::j2() * e;
            ok = try_assign({{unknown[0], z + u}, {unknown[1], z + w}}) ||
                 try_assign({{unknown[0], z + w}, {unknown[1], z + u}});
        }
        if (!ok) closed_[v] = false;
        return ok;
    }

    bool try_assign(const std::vector<std::pair<Vertex, EisensteinNumber>>& asg) {
        for (const auto& [w, val] : asg) value_[w] = val;
        if (descend()) return true;
        for (const auto& [w, val] : asg) value_[w].reset();
        return false;
    }

    static bool holomorphic(const EisensteinNumber& a, const EisensteinNumber& b, const EisensteinNumber& c) {
        return (a + b + c).is_zero() && (a * a + b * b + c * c).is_zero();
    }

    const Graph& g_;
    std::size_t node_cap_;
    std::size_t nodes_ = 0;
    std::vector<std::optional<EisensteinNumber>> value_;
    std::vector<bool> closed_;
};

}  // namespace detail

/// Decides whether a graph of valency <= 3 carries a nonconstant holomorphic function.
///
/// Vertices of valency 3 carry the constraint; lower-valency vertices are
/// boundary. The trivalent vertices must induce a connected subgraph that
/// touches every vertex, so that values propagate everywhere. One edge is
/// pinned to (0, 1), which is no loss of generality: a nonconstant solution
/// has no zero oscillation at a trivalent vertex, and similarities act on
/// solutions. All arithmetic is exact in Z[j].
inline TrivalentResult trivalent_feasibility(const GraphPtr& gp, const TrivalentOptions& opt = {}) {
    const Graph& g = *gp;
    std::vector<Vertex> core;
    for (Vertex v = 0; v < g.size(); ++v) {
        if (g.valency(v) > 3) throw unsupported_error("vertex '" + g.id(v) + "' has valency > 3");
        if (g.valency(v) == 3) core.push_back(v);
    }
    if (core.empty()) throw unsupported_error("graph has no trivalent vertex");
    if (g.cycle_rank() > opt.max_cycle_rank)
        throw resource_cap_error("cycle rank " + std::to_string(g.cycle_rank()) + " exceeds cap " +
                                 std::to_string(opt.max_cycle_rank));

    // Reachability through trivalent vertices.
    std::vector<bool> reached(g.size(), false);
    std::vector<Vertex> stack{core.front()};
    std::vector<bool> seen(g.size(), false);
    seen[core.front()] = true;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        reached[v] = true;
        for (Vertex w : g.neighbors(v)) {
            reached[w] = true;
            if (!seen[w] && g.valency(w) == 3) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    for (Vertex v = 0; v < g.size(); ++v)
        if (!reached[v])
            throw unsupported_error("vertex '" + g.id(v) + "' is not reached through trivalent vertices");

    TrivalentResult result;
    result.pinned = opt.pinned.value_or(std::make_pair(core.front(), g.neighbors(core.front())[0]));
    if (!g.adjacent(result.pinned.first, result.pinned.second)) throw input_error("pinned pair is not an edge");

    detail::TrivalentSearch search(g, opt.max_search_nodes);
    const bool found = search.run(result.pinned.first, result.pinned.second);
    result.search_nodes = search.nodes();
    if (!found) return result;

    result.kind = TrivalentResult::Kind::nonconstant_witness;
    result.exact = search.values();
    std::vector<cplx> vals;
    std::vector<bool> boundary;
    for (Vertex v = 0; v < g.size(); ++v) {
        vals.push_back((*result.exact)[v].to_complex());
        boundary.push_back(g.valency(v) != 3);
    }
    result.witness.emplace(gp, vals, boundary);
    return result;
}

}  // namespace dholo

#endif  // DHOLO_TRIVALENT_HPP
