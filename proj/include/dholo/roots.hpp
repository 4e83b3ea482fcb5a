#ifndef DHOLO_ROOTS_HPP
#define DHOLO_ROOTS_HPP

#include <cmath>
#include <numbers>
#include <span>
#include <limits>
#include <sstream>
#include <vector>

#include "core.hpp"

namespace dholo {

struct RootOptions {
    int max_iterations = 500;
    /// Acceptance of |p(root)| relative to sum_k |c_k| |root|^k.
    double residual_rel = 1e-8;
    /// Roots closer than this (relative to max(1, |root|)) are one multiple root.
    double cluster_rel = 1e-6;
};

struct RootCluster {
    cplx value;
    int multiplicity;
};

/// Evaluates sum_k c_k t^k (ascending coefficients) by Horner's rule.
inline cplx poly_eval(std::span<const cplx> c, cplx t) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
    return acc;
}

/// Natural backward-error scale sum_k |c_k| |t|^k.
inline double poly_scale(std::span<const cplx> c, cplx t) {
    double acc = 0.0;
    const double r = std::abs(t);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * r + std::abs(c[k]);
    return acc;
}

/// Groups numerically coincident roots.
inline std::vector<RootCluster> cluster_roots(std::span<const cplx> roots, double rel = 1e-6) {
    std::vector<RootCluster> out;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        cplx sum = roots[i];
        int n = 1;
        used[i] = true;
        for (std::size_t k = i + 1; k < roots.size(); ++k) {
            if (used[k]) continue;
            const double scale = std::max({1.0, std::abs(roots[i]), std::abs(roots[k])});
            if (std::abs(roots[k] - roots[i]) <= rel * scale) {
                used[k] = true;
                sum += roots[k];
                ++n;
            }
        }
        out.push_back({sum / static_cast<double>(n), n});
    }
    return out;
}

/// All roots (with multiplicity) of a monic polynomial, ascending coefficients
/// c_0 + c_1 t + ... + t^m, by Aberth-Ehrlich simultaneous iteration.
inline std::vector<cplx> find_roots(std::span<const cplx> coeffs, const RootOptions& opt = {}) {
    if (coeffs.size() < 2) throw input_error("find_roots needs degree >= 1");
    const std::size_t m = coeffs.size() - 1;
    if (std::abs(coeffs[m] - cplx{1.0, 0.0}) > 1e-12) throw input_error("find_roots needs a monic polynomial");
    if (m == 1) return {-coeffs[0]};

    std::vector<cplx> deriv(m);
    for (std::size_t k = 1; k <= m; ++k) deriv[k - 1] = coeffs[k] * static_cast<double>(k);

    // Start on a circle enclosing every root (Fujiwara-type bound).
    double radius = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        radius = std::max(radius, std::pow(std::abs(coeffs[k]), 1.0 / static_cast<double>(m - k)));
    radius = std::max(2.0 * radius, 1e-3);
    std::vector<cplx> z(m);
    for (std::size_t k = 0; k < m; ++k)
        z[k] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m) + 0.4);

    for (int it = 0; it < opt.max_iterations; ++it) {
        double worst = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const cplx p = poly_eval(coeffs, z[k]);
            if (p == cplx{0.0, 0.0}) continue;
            const cplx ratio = p / poly_eval(deriv, z[k]);
            cplx repulsion{0.0, 0.0};
            for (std::size_t l = 0; l < m; ++l)
                if (l != k) repulsion += 1.0 / (z[k] - z[l]);
            const cplx step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[k])));
        }
        if (worst < 1e-15) break;
    }

    // Multiple roots converge only to ~sqrt(eps); their cluster mean is far more accurate.
    std::vector<cplx> out;
    out.reserve(m);
    for (const auto& c : cluster_roots(z, opt.cluster_rel))
        for (int r = 0; r < c.multiplicity; ++r) out.push_back(c.value);

    std::ostringstream failures;
    bool ok = true;
    // near t = 0 the backward-error scale vanishes with the residual; floor it at rounding level
    double floor = 0.0;
    for (const cplx& c : coeffs) floor += std::abs(c);
    floor *= std::numeric_limits<double>::epsilon();
    for (const cplx& r : out) {
        const double res = std::abs(poly_eval(coeffs, r));
        if (!(res <= opt.residual_rel * std::max(poly_scale(coeffs, r), floor))) {
            ok = false;
            failures << " |p(" << r << ")|=" << res;
        }
    }
    if (!ok) throw numerical_failure("root finder did not converge:" + failures.str());
    return out;
}

inline std::vector<cplx> find_roots(const std::vector<cplx>& coeffs, const RootOptions& opt = {}) {
    return find_roots(std::span<const cplx>(coeffs), opt);
}

}  // namespace dholo

#endif  // DHOLO_ROOTS_HPP
