#ifndef DHOLO_MOMENTS_HPP
#define DHOLO_MOMENTS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "core.hpp"
#include "roots.hpp"

namespace dholo {

/// Tripod rule: the unique (up to switch) {u, v} with e+u+v = e^2+u^2+v^2 = 0,
/// namely {j e, j^2 e}.
inline UnorderedPair solve_pair(cplx e) { return {kJ * e, kJ2 * e}; }

/// Discriminant -3(e^2+f^2) - 2ef of u^2 + (e+f)u + (e^2+f^2+ef).
inline cplx pair2_discriminant(cplx e, cplx f) { return -3.0 * (e * e + f * f) - 2.0 * e * f; }

/// Both roots {u, v} of u^2 + (e+f)u + (e^2+f^2+ef) = 0, i.e. the solutions of
/// e+f+u+v = 0 and e^2+f^2+u^2+v^2 = 0.
inline UnorderedPair solve_pair2(cplx e, cplx f) {
    const cplx b = e + f;
    const cplx c = e * e + f * f + e * f;
    const cplx s = std::sqrt(pair2_discriminant(e, f));
    // Sign chosen so that b and the root add without cancellation.
    const cplx big = (std::real(std::conj(b) * s) >= 0.0) ? -(b + s) / 2.0 : -(b - s) / 2.0;
    if (std::abs(big) == 0.0) return {cplx{}, cplx{}};
    return {big, c / big};
}

/// Power sums to cancel: find m unknowns with sum_i x_i^p = -sum given^p for p = 1..order.
struct MomentSystem {
    std::vector<cplx> given;
    std::size_t unknown_count = 0;
    int order = 1;

    [[nodiscard]] std::vector<cplx> targets() const {
        std::vector<cplx> s(static_cast<std::size_t>(order));
        for (int p = 1; p <= order; ++p) {
            cplx acc{};
            for (const cplx& d : given) acc += ipow(d, p);
            s[static_cast<std::size_t>(p - 1)] = -acc;
        }
        return s;
    }
    [[nodiscard]] bool determined() const { return static_cast<std::size_t>(order) == unknown_count; }
    [[nodiscard]] bool underdetermined() const { return static_cast<std::size_t>(order) < unknown_count; }
    [[nodiscard]] bool overdetermined() const { return static_cast<std::size_t>(order) > unknown_count; }
};

struct SolutionSet {
    enum class Kind { unique_up_to_permutation, parametrized, infeasible, trivial_zero };
    Kind kind = Kind::infeasible;
    std::vector<cplx> roots;
    /// |sum over given and roots of x^p| for p = 1..order.
    std::vector<double> residuals;

    [[nodiscard]] bool feasible() const { return kind != Kind::infeasible; }
};

struct MomentOptions {
    Tolerance tol{};
    /// Extra unknowns of an underdetermined system: zero, or seeded random values.
    std::optional<std::uint64_t> seed;
    RootOptions roots{};
};

/// Newton's identities: elementary symmetric e_1..e_m from power sums s_1..s_m.
inline std::vector<cplx> elementary_from_power_sums(const std::vector<cplx>& s, std::size_t m) {
    std::vector<cplx> e(m + 1);
    e[0] = 1.0;
    for (std::size_t k = 1; k <= m; ++k) {
        cplx acc{};
        for (std::size_t i = 1; i <= k; ++i) {
            const double sign = (i % 2 == 1) ? 1.0 : -1.0;
            acc += sign * e[k - i] * s[i - 1];
        }
        e[k] = acc / static_cast<double>(k);
    }
    return e;
}

/// Monic polynomial with the given power sums, ascending coefficients.
inline std::vector<cplx> monic_from_power_sums(const std::vector<cplx>& s, std::size_t m) {
    auto e = elementary_from_power_sums(s, m);
    std::vector<cplx> c(m + 1);
    // t^m - e1 t^{m-1} + e2 t^{m-2} - ...
    for (std::size_t k = 0; k <= m; ++k) c[m - k] = ((k % 2 == 0) ? 1.0 : -1.0) * e[k];
    return c;
}

namespace detail {

inline std::vector<double> power_sum_residuals(const std::vector<cplx>& given, const std::vector<cplx>& roots, int order) {
    std::vector<double> res;
    for (int p = 1; p <= order; ++p) {
        cplx acc{};
        for (const cplx& d : given) acc += ipow(d, p);
        for (const cplx& r : roots) acc += ipow(r, p);
        res.push_back(std::abs(acc));
    }
    return res;
}

inline double magnitude(const std::vector<cplx>& xs) {
    double m = 0.0;
    for (const cplx& x : xs) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace detail

/// Solves a MomentSystem.
///
/// Determined (order == m): Newton's identities then all roots of the monic
/// polynomial. Underdetermined: the last m - order unknowns get a default
/// (zero, or seeded random values) and the rest is determined. Overdetermined:
/// the first m power sums determine the unknowns; the system is feasible only
/// if the remaining power sums also vanish.
inline SolutionSet solve_power_sums(const MomentSystem& sys, const MomentOptions& opt = {}) {
    if (sys.order < 1) throw input_error("moment system order must be >= 1");
    SolutionSet out;
    const std::size_t m = sys.unknown_count;
    const double scale = std::max(1.0, detail::magnitude(sys.given));

    std::vector<cplx> extra;
    std::size_t solved = m;
    if (sys.underdetermined()) {
        solved = static_cast<std::size_t>(sys.order);
        extra.assign(m - solved, cplx{});
        if (opt.seed) {
            std::mt19937_64 rng(*opt.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const double spread = std::max(detail::magnitude(sys.given), 1e-3);
            for (auto& x : extra) x = spread * cplx{gauss(rng), gauss(rng)};
        }
    }

    std::vector<cplx> basis = sys.given;
    basis.insert(basis.end(), extra.begin(), extra.end());
    MomentSystem core{basis, solved, static_cast<int>(std::min<std::size_t>(solved, static_cast<std::size_t>(sys.order)))};

    std::vector<cplx> roots;
    if (solved > 0) {
        auto s = core.targets();
        roots = find_roots(monic_from_power_sums(s, solved), opt.roots);
    }
    roots.insert(roots.end(), extra.begin(), extra.end());
    out.roots = roots;
    out.residuals = detail::power_sum_residuals(sys.given, roots, sys.order);

    bool ok = true;
    for (int p = 1; p <= sys.order; ++p)
        ok = ok && opt.tol.accepts(out.residuals[static_cast<std::size_t>(p - 1)], ipow(scale, p));

    if (!ok) {
        if (!sys.overdetermined())
            throw numerical_failure("power-sum solution misses its targets (residual " +
                                    std::to_string(*std::max_element(out.residuals.begin(), out.residuals.end())) + ")");
        out.kind = SolutionSet::Kind::infeasible;
        return out;
    }
    const bool all_zero = std::all_of(roots.begin(), roots.end(),
                                      [&](const cplx& r) { return std::abs(r) <= opt.tol.bound(scale); });
    if (sys.underdetermined())
        out.kind = SolutionSet::Kind::parametrized;
    else if (sys.overdetermined() && all_zero)
        out.kind = SolutionSet::Kind::trivial_zero;
    else
        out.kind = SolutionSet::Kind::unique_up_to_permutation;
    return out;
}

}  // namespace dholo

#endif  // DHOLO_MOMENTS_HPP
