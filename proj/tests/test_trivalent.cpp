#include <gtest/gtest.h>

#include <dholo/harmonic.hpp>
#include <dholo/hex_lattice.hpp>
#include <dholo/trivalent.hpp>

#include "test_support.hpp"

using namespace dholo;

namespace {

// Honeycomb tau_{0,1} in closed form: x + y j is a vertex iff x + y is not 2 mod 3.
int closed_form_class(const EisensteinNumber& z) {
    if (!z.is_integral()) return -1;
    const auto s = ((z.x().numerator() + z.y().numerator()) % 3 + 3) % 3;
    return s == 2 ? -1 : static_cast<int>(s);
}

// Rank of a complex matrix by Gaussian elimination with partial pivoting.
std::size_t rank_of(std::vector<std::vector<cplx>> a, double tol = 1e-9) {
    if (a.empty()) return 0;
    const std::size_t cols = a.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t piv = r;
        for (std::size_t i = r; i < a.size(); ++i)
            if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
        if (std::abs(a[piv][c]) < tol) continue;
        std::swap(a[r], a[piv]);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            const cplx k = a[i][c] / a[r][c];
            for (std::size_t q = c; q < cols; ++q) a[i][q] -= k * a[r][q];
        }
        ++r;
    }
    return r;
}

// Independent brute force: for every switch pattern, the trivalent constraints
// are linear; a nonconstant solution exists iff some pattern leaves a solution
// space of dimension >= 2 (constants always solve).
bool brute_force_nonconstant(const Graph& g) {
    std::vector<Vertex> tri;
    for (Vertex v = 0; v < g.size(); ++v)
        if (g.valency(v) == 3) tri.push_back(v);
    for (std::size_t mask = 0; mask < (std::size_t{1} << tri.size()); ++mask) {
        std::vector<std::vector<cplx>> rows;
        for (std::size_t k = 0; k < tri.size(); ++k) {
            const Vertex v = tri[k];
            auto nb = g.neighbors(v);
            const bool sw = (mask >> k) & 1U;
            const cplx c1 = sw ? kJ2 : kJ, c2 = sw ? kJ : kJ2;
            for (auto [w, c] : {std::pair{nb[1], c1}, std::pair{nb[2], c2}}) {
                // f(w) - f(v) - c (f(nb0) - f(v)) = 0
                std::vector<cplx> row(g.size());
                row[w] += 1.0;
                row[v] += -1.0 + c;
                row[nb[0]] -= c;
                rows.push_back(row);
            }
        }
        if (g.size() - rank_of(rows) >= 2) return true;
    }
    return false;
}

void expect_similarity_of(const ComplexFunction& f, const HoneycombPatch& p, std::pair<Vertex, Vertex> pin) {
    const cplx za = p.position[pin.first], zb = p.position[pin.second];
    double direct = 0.0, mirrored = 0.0;
    for (Vertex v = 0; v < p.graph->size(); ++v) {
        const cplx fv = f.value(v);
        direct = std::max(direct, std::abs(fv - (p.position[v] - za) / (zb - za)));
        mirrored = std::max(mirrored, std::abs(fv - std::conj((p.position[v] - za) / (zb - za))));
    }
    EXPECT_LT(std::min(direct, mirrored), 1e-9);
}

}  // namespace

TEST(HexLattice, FundamentalHexagonAndClasses) {
    HexLattice lat;
    auto h = lat.fundamental_hexagon();
    EXPECT_EQ(h[0], EisensteinNumber(0, 0));
    EXPECT_EQ(h[1], EisensteinNumber(1, 0));
    EXPECT_EQ(h[2], EisensteinNumber(1, -1));
    EXPECT_EQ(h[3], EisensteinNumber(0, -2));
    EXPECT_EQ(h[4], EisensteinNumber(-1, -2));
    EXPECT_EQ(h[5], EisensteinNumber(-1, -1));
    for (int k = 0; k < 6; ++k) EXPECT_EQ((h[(k + 1) % 6] - h[k]).norm(), Rational(1));
    EXPECT_EQ(lat.vertex_class(h[0]), 0);
    EXPECT_EQ(lat.vertex_class(h[1]), 1);
}

TEST(HexLattice, MatchesClosedForm) {
    HexLattice lat({}, {1, 0}, 6);
    for (const auto& [z, cls] : lat.vertices()) ASSERT_EQ(closed_form_class(z), cls) << z;
    // every closed-form vertex of the ball of radius 6 is generated
    auto ball = lat.ball(6);
    for (std::int64_t x = -8; x <= 8; ++x)
        for (std::int64_t y = -8; y <= 8; ++y) {
            EisensteinNumber z(x, y);
            if (closed_form_class(z) >= 0 && z.norm() <= Rational(9)) EXPECT_TRUE(lat.contains(z)) << z;
        }
    EXPECT_FALSE(lat.contains(EisensteinNumber(1, 1)));
    EXPECT_THROW((void)lat.vertex_class(EisensteinNumber(1, 1)), input_error);
    EXPECT_THROW((void)lat.ball(7), resource_cap_error);
}

TEST(HexLattice, SphereSizesGrowLinearly) {
    HexLattice lat({}, {1, 0}, 8);
    auto ball = lat.ball(8);
    std::vector<std::size_t> sphere(9, 0);
    for (const auto& [z, d] : ball) ++sphere[d];
    EXPECT_EQ(sphere[0], 1u);
    for (std::size_t d = 1; d <= 8; ++d) EXPECT_EQ(sphere[d], 3 * d);
}

TEST(HexLattice, ScaledAndShifted) {
    const EisensteinNumber alpha(2, 5), w(1, 2);
    HexLattice lat(alpha, w, 3);
    for (const auto& [z, cls] : lat.vertices()) {
        const auto local = (z - alpha) / w;
        EXPECT_EQ(closed_form_class(local), cls);
    }
    EXPECT_THROW(HexLattice({}, {0, 0}), input_error);
}

TEST(Trivalent, SmallGirthIsRigid) {
    EXPECT_TRUE(trivalent_feasibility(complete_graph(4)).constant_only());
    EXPECT_TRUE(trivalent_feasibility(cube_graph()).constant_only());
    EXPECT_TRUE(trivalent_feasibility(petersen_graph()).constant_only());
}

TEST(Trivalent, HexPatchWitnessIsSimilarity) {
    for (std::size_t depth : {0u, 1u, 3u}) {
        auto p = hexagon_patch(depth);
        auto r = trivalent_feasibility(p.graph);
        ASSERT_FALSE(r.constant_only());
        ASSERT_TRUE(r.witness);
        EXPECT_TRUE(is_holomorphic(*r.witness).verdict);
        expect_similarity_of(*r.witness, p, r.pinned);
        for (const auto& z : *r.exact) EXPECT_TRUE(z.is_integral());
    }
}

TEST(Trivalent, HoneycombBallIsFlexibleNearItsRim) {
    // Outer vertices of a graph ball lie on no closed hexagon, so switches there are free.
    auto p = honeycomb_ball(4);
    auto r = trivalent_feasibility(p.graph);
    ASSERT_FALSE(r.constant_only());
    EXPECT_TRUE(is_holomorphic(*r.witness).verdict);
}

TEST(HexLattice, PatchShape) {
    auto p = hexagon_patch(0);
    // one hexagon with six pendants
    EXPECT_EQ(p.graph->size(), 12u);
    EXPECT_EQ(p.graph->cycle_rank(), 1u);
    auto q = hexagon_patch(1);
    // seven hexagons: 24 vertices, 12 pendants
    EXPECT_EQ(q.graph->size(), 36u);
    EXPECT_EQ(q.graph->cycle_rank(), 7u);
    std::size_t pend = 0;
    for (Vertex v = 0; v < q.graph->size(); ++v) {
        if (q.boundary[v]) {
            ++pend;
            EXPECT_EQ(q.graph->valency(v), 1u);
        } else {
            EXPECT_EQ(q.graph->valency(v), 3u);
        }
    }
    EXPECT_EQ(pend, 12u);
}

TEST(Trivalent, TreesAreFlexible) {
    auto ball = regular_tree_ball(3, 3);
    auto r = trivalent_feasibility(ball.graph);
    EXPECT_FALSE(r.constant_only());
    EXPECT_TRUE(is_holomorphic(*r.witness).verdict);
}

TEST(Trivalent, Errors) {
    EXPECT_THROW(trivalent_feasibility(complete_graph(5)), unsupported_error);
    EXPECT_THROW(trivalent_feasibility(path_graph(4)), unsupported_error);
    TrivalentOptions tight;
    tight.max_cycle_rank = 3;
    EXPECT_THROW(trivalent_feasibility(petersen_graph(), tight), resource_cap_error);
    // K4 with one edge subdivided twice: the middle path vertices are only reached by valency-2 vertices
    auto g = make_graph(numbered_ids(7), {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 4}, {4, 5}, {5, 6}});
    EXPECT_THROW(trivalent_feasibility(g), unsupported_error);
    TrivalentOptions bad;
    bad.pinned = std::make_pair(Vertex{0}, Vertex{7});
    EXPECT_THROW(trivalent_feasibility(petersen_graph(), bad), input_error);
}

TEST(Trivalent, AgreesWithBruteForce) {
    std::mt19937_64 rng(31);
    int flexible = 0, rigid = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 4 + rng() % 7;
        auto g = dholo::testing::random_connected_graph(rng, n, rng() % 5, 3);
        TrivalentResult r;
        try {
            r = trivalent_feasibility(g);
        } catch (const unsupported_error&) {
            continue;
        }
        const bool expected = brute_force_nonconstant(*g);
        ASSERT_EQ(!r.constant_only(), expected) << "trial " << trial;
        if (expected) {
            ++flexible;
            EXPECT_TRUE(is_holomorphic(*r.witness).verdict);
        } else {
            ++rigid;
        }
    }
    EXPECT_GT(flexible, 20);
    EXPECT_GT(rigid, 20);
}
