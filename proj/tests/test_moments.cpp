#include <gtest/gtest.h>

#include <dholo/moments.hpp>
#include <dholo/roots.hpp>

#include "test_support.hpp"

using namespace dholo;
using dholo::testing::random_complex;

namespace {

// Greedy multiset match, good enough for well separated roots.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    for (const cplx& x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

std::vector<cplx> expand(const std::vector<cplx>& roots) {
    std::vector<cplx> c{1.0};
    for (const cplx& r : roots) {
        std::vector<cplx> next(c.size() + 1);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = next;
    }
    return c;
}

}  // namespace

TEST(FindRoots, Examples) {
    auto r = find_roots({1.0, 0.0, 1.0});
    EXPECT_LT(multiset_distance(r, {cplx(0, 1), cplx(0, -1)}), 1e-12);

    auto cube = find_roots({-1.0, 0.0, 0.0, 1.0});
    EXPECT_LT(multiset_distance(cube, {1.0, kJ, kJ2}), 1e-12);

    // (t - (1+i))^2 (t - 3) = t^3 - (5+2i) t^2 + (6+8i) t - 6i
    std::vector<cplx> c{cplx(0, -6), cplx(6, 8), cplx(-5, -2), 1.0};
    EXPECT_LT(multiset_distance(c, expand({cplx(1, 1), cplx(1, 1), 3.0})), 1e-14);
    auto m = find_roots(c);
    auto clusters = cluster_roots(m);
    ASSERT_EQ(clusters.size(), 2u);
    for (const auto& cl : clusters) {
        if (std::abs(cl.value - cplx(1, 1)) < 1e-6)
            EXPECT_EQ(cl.multiplicity, 2);
        else
            EXPECT_NEAR(std::abs(cl.value - 3.0), 0.0, 1e-9);
    }
}

TEST(FindRoots, RejectsBadInput) {
    EXPECT_THROW(find_roots({1.0}), input_error);
    EXPECT_THROW(find_roots({1.0, 2.0}), input_error);
    EXPECT_EQ(find_roots({cplx(2, 1), 1.0}).front(), cplx(-2, -1));
}

TEST(FindRoots, RandomPolynomials) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<cplx> roots(1 + trial % 8);
        for (auto& r : roots) r = random_complex(rng, 2.0);
        auto found = find_roots(expand(roots));
        EXPECT_LT(multiset_distance(found, roots), 1e-7);
    }
}

TEST(SolvePair, Examples) {
    auto p = solve_pair(1.0);
    EXPECT_TRUE(same_pair(p, {cplx(-0.5, std::sqrt(3.0) / 2), cplx(-0.5, -std::sqrt(3.0) / 2)}, 1e-15));
    auto z = solve_pair(0.0);
    EXPECT_EQ(z.first, cplx(0.0));
    EXPECT_EQ(z.second, cplx(0.0));
    auto q = solve_pair(cplx(0, 2));
    EXPECT_TRUE(same_pair(q, {cplx(-std::sqrt(3.0), -1.0), cplx(std::sqrt(3.0), -1.0)}, 1e-14));
    const cplx e(0, 2);
    EXPECT_LT(std::abs(e + q.first + q.second), 1e-14);
    EXPECT_LT(std::abs(e * e + q.first * q.first + q.second * q.second), 1e-14);
}

TEST(SolvePair2, Examples) {
    EXPECT_TRUE(same_pair(solve_pair2(1.0, -1.0), {cplx(0, 1), cplx(0, -1)}, 1e-15));
    const double r2 = std::sqrt(2.0);
    const cplx e(1, -r2), f(1, r2);
    EXPECT_LT(std::abs(pair2_discriminant(e, f)), 1e-12);
    auto d = solve_pair2(e, f);
    EXPECT_LT(std::abs(d.first + 1.0), 1e-7);
    EXPECT_LT(std::abs(d.second + 1.0), 1e-7);
    EXPECT_LT(std::abs(e + f + d.first + d.second), 1e-12);
    EXPECT_LT(std::abs(e * e + f * f + d.first * d.first + d.second * d.second), 1e-12);
    auto zero = solve_pair2(0.0, 0.0);
    EXPECT_EQ(zero.first, cplx(0.0));
    EXPECT_EQ(zero.second, cplx(0.0));
}

TEST(SolvePair2, Properties) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20000; ++trial) {
        const cplx e = random_complex(rng), f = random_complex(rng), lambda = random_complex(rng);
        auto uv = solve_pair2(e, f);
        const double s = 1.0 + std::abs(e) + std::abs(f);
        ASSERT_LT(std::abs(e + f + uv.sum()), 1e-12 * s);
        ASSERT_LT(std::abs(e * e + f * f + uv.first * uv.first + uv.second * uv.second), 1e-12 * s * s);
        ASSERT_LT(pair_distance(uv, solve_pair2(f, e)), 1e-12 * s);
        auto back = solve_pair2(uv.first, uv.second);
        ASSERT_LT(pair_distance(back, {e, f}), 1e-9 * s);
        auto scaled = solve_pair2(lambda * e, lambda * f);
        ASSERT_LT(pair_distance(scaled, {lambda * uv.first, lambda * uv.second}), 1e-11 * s * (1.0 + std::abs(lambda)));

        auto p = solve_pair(e);
        ASSERT_LT(std::min(std::abs(p.first - kJ * e), std::abs(p.first - kJ2 * e)), 1e-15 * s);
        ASSERT_LT(pair_distance(p, p.swapped()), 1e-15 * s + std::abs(p.first - p.second));
    }
}

TEST(SolvePowerSums, Examples) {
    // s1 = s2 = 0, s3 = 3: e1 = e2 = 0, e3 = 1 -> t^3 - 1
    auto poly = monic_from_power_sums({0.0, 0.0, 3.0}, 3);
    EXPECT_LT(std::abs(poly[0] + 1.0), 1e-15);
    EXPECT_LT(std::abs(poly[1]), 1e-15);
    EXPECT_LT(std::abs(poly[2]), 1e-15);
    auto roots = find_roots(poly);
    EXPECT_LT(multiset_distance(roots, {1.0, kJ, kJ2}), 1e-12);
    for (const cplx& r : roots) EXPECT_LT(std::abs(ipow(r, 3) - 1.0), 1e-12);
    // Same system as a MomentSystem: the given values {-1, -j, -j^2} have power sums (0, 0, -3).
    auto sol = solve_power_sums({{-1.0, -kJ, -kJ2}, 3, 3});
    EXPECT_EQ(sol.kind, SolutionSet::Kind::unique_up_to_permutation);
    EXPECT_LT(multiset_distance(sol.roots, {1.0, kJ, kJ2}), 1e-12);

    auto pair = solve_power_sums({{1.0, -1.0}, 2, 2});
    EXPECT_LT(multiset_distance(pair.roots, {cplx(0, 1), cplx(0, -1)}), 1e-12);

    auto bad = solve_power_sums({{1.0, 0.0}, 1, 2});
    EXPECT_EQ(bad.kind, SolutionSet::Kind::infeasible);
    EXPECT_FALSE(bad.feasible());
}

TEST(SolvePowerSums, RegimesAndDefaults) {
    auto zero = solve_power_sums({{0.0, 0.0}, 1, 3});
    EXPECT_EQ(zero.kind, SolutionSet::Kind::trivial_zero);
    EXPECT_EQ(zero.roots.size(), 1u);

    auto under = solve_power_sums({{1.0}, 3, 2});
    EXPECT_EQ(under.kind, SolutionSet::Kind::parametrized);
    ASSERT_EQ(under.roots.size(), 3u);
    EXPECT_EQ(under.roots.back(), cplx(0.0));
    for (double r : under.residuals) EXPECT_LT(r, 1e-12);

    MomentOptions seeded;
    seeded.seed = 42;
    auto a = solve_power_sums({{1.0}, 3, 2}, seeded);
    auto b = solve_power_sums({{1.0}, 3, 2}, seeded);
    EXPECT_EQ(a.roots, b.roots);
    EXPECT_NE(a.roots.back(), cplx(0.0));
    for (double r : a.residuals) EXPECT_LT(r, 1e-10);

    // {1, j, u}: u = j^2 closes both power sums although the system is overdetermined
    auto over = solve_power_sums({{1.0, kJ}, 1, 2});
    EXPECT_EQ(over.kind, SolutionSet::Kind::unique_up_to_permutation);
    EXPECT_LT(multiset_distance(over.roots, {kJ2}), 1e-12);
    // three numbers with p = 1, 2, 3 all vanishing are all zero
    EXPECT_EQ(solve_power_sums({{1.0}, 2, 3}).kind, SolutionSet::Kind::infeasible);

    EXPECT_THROW(solve_power_sums({{1.0}, 1, 0}), input_error);
}

TEST(SolvePowerSums, AgreesWithSolvePair2) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 2000; ++trial) {
        const cplx e = random_complex(rng), f = random_complex(rng);
        auto sol = solve_power_sums({{e, f}, 2, 2});
        ASSERT_EQ(sol.roots.size(), 2u);
        ASSERT_LT(pair_distance({sol.roots[0], sol.roots[1]}, solve_pair2(e, f)), 1e-7 * (1.0 + std::abs(e) + std::abs(f)));
    }
}

TEST(SolvePowerSums, RoundTrip) {
    // For each hidden root r, the values r w^k (k = 1..m, w a primitive (m+1)-th root of
    // unity) have power sums -r^p for p <= m, so the unknowns must be exactly the hidden roots.
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 6);
        std::vector<cplx> roots(m);
        for (auto& r : roots) r = random_complex(rng);
        MomentSystem sys{{}, m, static_cast<int>(m)};
        for (const cplx& r : roots)
            for (std::size_t k = 1; k <= m; ++k)
                sys.given.push_back(r * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m + 1)));
        auto sol = solve_power_sums(sys);
        ASSERT_EQ(sol.kind, SolutionSet::Kind::unique_up_to_permutation);
        EXPECT_LT(multiset_distance(sol.roots, roots), 1e-7);
    }
}
