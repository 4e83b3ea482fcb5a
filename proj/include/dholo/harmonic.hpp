#ifndef DHOLO_HARMONIC_HPP
#define DHOLO_HARMONIC_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "graph.hpp"

namespace dholo {

/// Discrete gradient at a vertex: delta_i = f(s_i) - f(s_0), in stored neighbour order.
template <class T>
struct OscillationVector {
    Vertex base{};
    std::vector<T> entries;

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const T& d : entries) s += std::norm(d);
        return std::sqrt(s);
    }
    /// (1/n) sum delta_i^p
    [[nodiscard]] T mean_power(int p) const {
        T s{};
        for (const T& d : entries) s += ipow(d, p);
        return s / static_cast<double>(entries.size());
    }
};

namespace detail {

template <class T>
void require_interior(const VertexFunction<T>& f, Vertex v) {
    if (!f.is_interior(v))
        throw missing_data_error("vertex '" + f.graph().id(v) + "' is not interior");
}

template <class T>
double local_scale(const VertexFunction<T>& f, Vertex v) {
    double s = std::abs(f.value(v));
    for (Vertex w : f.graph().neighbors(v)) s = std::max(s, std::abs(f.value(w)));
    return s;
}

}  // namespace detail

template <class T>
OscillationVector<T> oscillation(const VertexFunction<T>& f, Vertex v) {
    detail::require_interior(f, v);
    OscillationVector<T> out{v, {}};
    const T& z0 = f.value(v);
    for (Vertex w : f.graph().neighbors(v)) out.entries.push_back(f.value(w) - z0);
    return out;
}

/// Mean of the neighbour values of f^p minus f(v)^p.
template <class T>
T laplacian_of_power(const VertexFunction<T>& f, Vertex v, int p) {
    detail::require_interior(f, v);
    T s{};
    auto nb = f.graph().neighbors(v);
    for (Vertex w : nb) s += ipow(f.value(w), p);
    return s / static_cast<double>(nb.size()) - ipow(f.value(v), p);
}

template <class T>
T laplacian(const VertexFunction<T>& f, Vertex v) {
    return laplacian_of_power(f, v, 1);
}

/// Verdict of a pointwise checker over the interior of a function.
struct CheckResult {
    bool verdict = true;
    double max_residual = 0.0;
    std::optional<Vertex> at_vertex;
    std::string at_id;
    std::size_t checked = 0;
    std::size_t unchecked = 0;  // valued vertices outside the interior
    /// Holomorphy only: max |Delta(f^2) - mean delta^2| over harmonic vertices.
    double max_square_identity_gap = 0.0;
};

namespace detail {

template <class T>
CheckResult begin_check(const VertexFunction<T>& f) {
    CheckResult r;
    for (Vertex v = 0; v < f.graph().size(); ++v) {
        if (f.is_interior(v))
            ++r.checked;
        else if (f.has_value(v))
            ++r.unchecked;
    }
    if (r.checked == 0) throw missing_data_error("function has no interior vertex");
    return r;
}

inline void record(CheckResult& r, const Graph& g, Vertex v, double residual, bool ok) {
    if (!ok) r.verdict = false;
    if (!r.at_vertex || residual > r.max_residual) {
        r.max_residual = residual;
        r.at_vertex = v;
        r.at_id = g.id(v);
    }
}

}  // namespace detail

template <class T>
CheckResult is_harmonic(const VertexFunction<T>& f, const Tolerance& tol = {}) {
    CheckResult r = detail::begin_check(f);
    for (Vertex v : f.interior()) {
        const double res = std::abs(laplacian(f, v));
        detail::record(r, f.graph(), v, res, tol.accepts(res, detail::local_scale(f, v)));
    }
    return r;
}

/// Holomorphy through the oscillation power sums: mean delta = mean delta^2 = 0.
template <class T>
CheckResult is_holomorphic(const VertexFunction<T>& f, const Tolerance& tol = {}) {
    CheckResult r = detail::begin_check(f);
    for (Vertex v : f.interior()) {
        const auto osc = oscillation(f, v);
        const double scale = detail::local_scale(f, v);
        const double r1 = std::abs(osc.mean_power(1));
        const double r2 = std::abs(osc.mean_power(2));
        const bool ok1 = tol.accepts(r1, scale);
        const bool ok2 = tol.accepts(r2, scale * scale);
        detail::record(r, f.graph(), v, std::max(r1, r2), ok1 && ok2);
        if (ok1) {
            const double gap = std::abs(laplacian_of_power(f, v, 2) - osc.mean_power(2));
            r.max_square_identity_gap = std::max(r.max_square_identity_gap, gap);
        }
    }
    return r;
}

/// (*)_N: Delta(f^p) = 0 for p = 1..N, evaluated directly on the powers.
template <class T>
CheckResult is_n_holomorphic(const VertexFunction<T>& f, int order, const Tolerance& tol = {}) {
    if (order < 1) throw input_error("holomorphy order must be >= 1");
    CheckResult r = detail::begin_check(f);
    for (Vertex v : f.interior()) {
        const double scale = detail::local_scale(f, v);
        double worst = 0.0;
        bool ok = true;
        for (int p = 1; p <= order; ++p) {
            const double res = std::abs(laplacian_of_power(f, v, p));
            worst = std::max(worst, res);
            ok = ok && tol.accepts(res, ipow(scale, p));
        }
        detail::record(r, f.graph(), v, worst, ok);
    }
    return r;
}

/// Discrete inner product (1/nu) sum delta_i(f) delta_i(g) at v (bilinear, no conjugation).
template <class T>
T gradient_product(const VertexFunction<T>& f, const VertexFunction<T>& g, Vertex v) {
    const auto a = oscillation(f, v);
    const auto b = oscillation(g, v);
    T s{};
    for (std::size_t i = 0; i < a.entries.size(); ++i) s += a.entries[i] * b.entries[i];
    return s / static_cast<double>(a.entries.size());
}

}  // namespace dholo

#endif  // DHOLO_HARMONIC_HPP
