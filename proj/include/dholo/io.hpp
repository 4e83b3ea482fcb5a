#ifndef DHOLO_IO_HPP
#define DHOLO_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conjugate.hpp"
#include "graph.hpp"
#include "harmonic.hpp"
#include "tr3.hpp"

namespace dholo::io {

using json = nlohmann::json;

/// x rounded to 12 significant digits; -0 becomes 0.
inline double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double y = std::strtod(buf, nullptr);
    return y == 0.0 ? 0.0 : y;
}

inline json complex_json(cplx z) { return json::array({round12(z.real()), round12(z.imag())}); }

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace detail {

template <class T, class Put>
json function_json(const VertexFunction<T>& f, Put put) {
    const Graph& g = f.graph();
    json out;
    out["vertices"] = g.ids();
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back(json::array({g.id(u), g.id(v)}));
    out["edges"] = std::move(edges);
    json values = json::object();
    for (Vertex v = 0; v < g.size(); ++v)
        if (f.has_value(v)) values[g.id(v)] = put(f.value(v));
    out["values"] = std::move(values);
    json bd = json::array();
    for (Vertex v = 0; v < g.size(); ++v)
        if (f.is_boundary(v)) bd.push_back(g.id(v));
    if (!bd.empty()) out["boundary"] = std::move(bd);
    return out;
}

}  // namespace detail

inline json to_json(const ComplexFunction& f) { return detail::function_json(f, complex_json); }
inline json to_json(const RealVertexFunction& f) {
    return detail::function_json(f, [](double x) { return json(round12(x)); });
}

/// Graph plus values as read from a file. Real files carry scalar values.
struct LoadedFunction {
    GraphPtr graph;
    std::vector<std::optional<cplx>> values;
    std::vector<bool> boundary;
    bool real = true;

    [[nodiscard]] ComplexFunction complex() const { return {graph, values, boundary}; }
    [[nodiscard]] RealVertexFunction real_part() const {
        std::vector<std::optional<double>> r(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i]) r[i] = values[i]->real();
        return {graph, std::move(r), boundary};
    }
};

inline LoadedFunction function_from_json(const json& j) {
    try {
        if (!j.is_object()) throw input_error("function file must hold a JSON object");
        auto ids = j.at("vertices").get<std::vector<std::string>>();
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw input_error("an edge must be a pair of ids");
            edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
        }
        LoadedFunction out;
        out.graph = std::make_shared<const Graph>(Graph::from_ids(ids, edges));
        out.values.resize(ids.size());
        out.boundary.assign(ids.size(), false);
        for (const auto& [id, val] : j.at("values").items()) {
            const Vertex v = out.graph->index(id);
            if (val.is_number()) {
                out.values[v] = cplx(val.get<double>(), 0.0);
            } else if (val.is_array() && val.size() == 2 && val[0].is_number() && val[1].is_number()) {
                out.values[v] = cplx(val[0].get<double>(), val[1].get<double>());
                out.real = false;
            } else {
                throw input_error("value at '" + id + "' must be a number or [re, im]");
            }
        }
        if (j.contains("boundary"))
            for (const auto& id : j.at("boundary")) out.boundary[out.graph->index(id.get<std::string>())] = true;
        return out;
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed function file: ") + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw input_error("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write '" + path + "'");
    out << text;
}

inline json to_json(const CheckResult& r) {
    json out{{"verdict", r.verdict}, {"max_residual", round12(r.max_residual)}};
    out["at_vertex"] = r.at_vertex ? json(r.at_id) : json(nullptr);
    return out;
}

inline json to_json(const InfeasibilityCertificate& c) {
    return {{"vertex", c.id}, {"bound", round12(c.bound)}, {"required", round12(c.required)}, {"reason", c.reason}};
}

inline json to_json(const MarkedTriangle& t) {
    return {{"p", complex_json(t.p)}, {"e", complex_json(t.e)}, {"f", complex_json(t.f)}};
}

inline MarkedTriangle triangle_from_json(const json& j) {
    auto get = [&](const char* k) {
        const auto& a = j.at(k);
        if (!a.is_array() || a.size() != 2) throw input_error(std::string("'") + k + "' must be [re, im]");
        return cplx(a[0].get<double>(), a[1].get<double>());
    };
    try {
        return {get("p"), get("e"), get("f")};
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed triangle state: ") + e.what());
    }
}

}  // namespace dholo::io

#endif  // DHOLO_IO_HPP
