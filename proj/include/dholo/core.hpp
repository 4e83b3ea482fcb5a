#ifndef DHOLO_CORE_HPP
#define DHOLO_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace dholo {

using cplx = std::complex<double>;

/// Primitive cube root of unity e^{2 pi i / 3}.
inline const cplx kJ{-0.5, std::numbers::sqrt3 / 2.0};
inline const cplx kJ2{-0.5, -std::numbers::sqrt3 / 2.0};

// Error hierarchy. Every failure the library reports derives from dholo::error.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct input_error : error {
    using error::error;
};
struct missing_data_error : error {
    using error::error;
};
struct unsupported_error : error {
    using error::error;
};
struct resource_cap_error : error {
    using error::error;
};
struct numerical_failure : error {
    using error::error;
};
struct infeasible_error : error {
    using error::error;
};

/// Residual acceptance: |r| <= eps_abs + eps_rel * scale.
struct Tolerance {
    double eps_abs = 1e-9;
    double eps_rel = 1e-9;

    Tolerance() = default;
    Tolerance(double abs, double rel) : eps_abs(abs), eps_rel(rel) {
        if (!(abs > 0.0) || !(rel > 0.0))
            throw input_error("tolerances must be strictly positive");
    }

    [[nodiscard]] double bound(double scale) const { return eps_abs + eps_rel * scale; }
    [[nodiscard]] bool accepts(double residual, double scale) const {
        return residual <= bound(scale);
    }
};

/// Two values compared as a multiset of size two.
struct UnorderedPair {
    cplx first;
    cplx second;

    [[nodiscard]] cplx sum() const { return first + second; }
    [[nodiscard]] UnorderedPair swapped() const { return {second, first}; }
};

/// Distance between unordered pairs: the better of the two matchings.
inline double pair_distance(const UnorderedPair& a, const UnorderedPair& b) {
    const double straight = std::max(std::abs(a.first - b.first), std::abs(a.second - b.second));
    const double crossed = std::max(std::abs(a.first - b.second), std::abs(a.second - b.first));
    return std::min(straight, crossed);
}

inline bool same_pair(const UnorderedPair& a, const UnorderedPair& b, double tol) {
    return pair_distance(a, b) <= tol;
}

inline cplx ipow(cplx z, int p) {
    cplx r{1.0, 0.0};
    for (int k = 0; k < p; ++k) r *= z;
    return r;
}

inline double ipow(double x, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

}  // namespace dholo

#endif  // DHOLO_CORE_HPP
