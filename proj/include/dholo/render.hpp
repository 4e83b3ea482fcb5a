#ifndef DHOLO_RENDER_HPP
#define DHOLO_RENDER_HPP

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "graph.hpp"

namespace dholo {

enum class ColorBy { depth, branch, none };

struct Viewport {
    cplx lo, hi;
};

struct RenderSpec {
    int width = 800;
    int height = 800;
    double point_radius = 1.5;
    ColorBy color_by = ColorBy::depth;
    std::optional<Viewport> viewport;  // automatic when empty

    void validate() const {
        if (width <= 0 || height <= 0) throw input_error("image dimensions must be positive");
        if (!(point_radius > 0.0)) throw input_error("point radius must be positive");
        if (viewport && !(viewport->hi.real() > viewport->lo.real() && viewport->hi.imag() > viewport->lo.imag()))
            throw input_error("viewport is empty");
    }
};

struct RenderPoint {
    cplx z;
    std::size_t depth = 0;
    int branch = 0;
};

namespace detail {

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

inline std::string colour(std::size_t k) {
    static const char* palette[] = {"#1b1b1b", "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f"};
    return palette[k % 10];
}

inline Viewport fit(const std::vector<cplx>& zs) {
    if (zs.empty()) return {{-1, -1}, {1, 1}};
    double x0 = zs[0].real(), x1 = x0, y0 = zs[0].imag(), y1 = y0;
    for (const cplx& z : zs) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    // square, 5% margin
    const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
    const double h = std::max({x1 - x0, y1 - y0, 1e-9}) * 0.525;
    return {{cx - h, cy - h}, {cx + h, cy + h}};
}

}  // namespace detail

/// SVG with one <circle> per point and optional segments drawn underneath.
inline std::string render_svg(const std::vector<RenderPoint>& points, const RenderSpec& spec = {},
                              const std::vector<std::pair<cplx, cplx>>& segments = {}) {
    spec.validate();
    std::vector<cplx> all;
    for (const auto& p : points) all.push_back(p.z);
    for (const auto& [a, b] : segments) {
        all.push_back(a);
        all.push_back(b);
    }
    const Viewport vp = spec.viewport ? *spec.viewport : detail::fit(all);
    const double sx = spec.width / (vp.hi.real() - vp.lo.real());
    const double sy = spec.height / (vp.hi.imag() - vp.lo.imag());
    auto X = [&](cplx z) { return detail::fmt((z.real() - vp.lo.real()) * sx); };
    auto Y = [&](cplx z) { return detail::fmt((vp.hi.imag() - z.imag()) * sy); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
       << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!segments.empty()) {
        os << "<g stroke=\"#999999\" stroke-width=\"0.6\">\n";
        for (const auto& [a, b] : segments)
            os << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\"/>\n";
        os << "</g>\n";
    }
    os << "<g stroke=\"none\">\n";
    for (const auto& p : points) {
        std::string fill = "#1b1b1b";
        if (spec.color_by == ColorBy::depth) fill = detail::colour(p.depth);
        if (spec.color_by == ColorBy::branch) fill = detail::colour(static_cast<std::size_t>(p.branch));
        os << "<circle cx=\"" << X(p.z) << "\" cy=\"" << Y(p.z) << "\" r=\"" << detail::fmt(spec.point_radius)
           << "\" fill=\"" << fill << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

/// Values of f as points (depth = graph distance from `root`) and its edges as segments.
inline std::string render_function_svg(const ComplexFunction& f, Vertex root = 0, const RenderSpec& spec = {}) {
    const Graph& g = f.graph();
    auto depth = g.distances_from(root);
    std::vector<RenderPoint> pts;
    for (Vertex v = 0; v < g.size(); ++v)
        if (f.has_value(v)) pts.push_back({f.value(v), depth[v], 0});
    std::vector<std::pair<cplx, cplx>> seg;
    for (const auto& [u, v] : g.edges())
        if (f.has_value(u) && f.has_value(v)) seg.emplace_back(f.value(u), f.value(v));
    return render_svg(pts, spec, seg);
}

/// re,im,depth with 12 significant digits.
inline std::string points_csv(const std::vector<RenderPoint>& points) {
    std::ostringstream os;
    os << "re,im,depth\n";
    char buf[96];
    for (const auto& p : points) {
        const double re = p.z.real() == 0.0 ? 0.0 : p.z.real(), im = p.z.imag() == 0.0 ? 0.0 : p.z.imag();
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%zu\n", re, im, p.depth);
        os << buf;
    }
    return os.str();
}

/// Parses re,im[,depth] lines; a header line is skipped.
inline std::vector<RenderPoint> points_from_csv(const std::string& text) {
    std::vector<RenderPoint> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        try {
            if (cells.size() < 2) throw std::invalid_argument("short");
            RenderPoint p{{std::stod(cells[0]), std::stod(cells[1])}, 0, 0};
            if (cells.size() > 2) p.depth = std::stoul(cells[2]);
            out.push_back(p);
        } catch (const std::exception&) {
            if (lineno == 1) continue;
            throw input_error("bad point on CSV line " + std::to_string(lineno));
        }
    }
    return out;
}

}  // namespace dholo

#endif  // DHOLO_RENDER_HPP
