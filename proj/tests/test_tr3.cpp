#include <gtest/gtest.h>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/isomorphism.hpp>

#include <dholo/tr3.hpp>

#include "test_support.hpp"

using namespace dholo;
using dholo::testing::random_complex;

namespace {

using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;

BGraph to_boost(const Graph& g) {
    BGraph b(g.size());
    for (const auto& [u, v] : g.edges()) boost::add_edge(u, v, b);
    return b;
}

double max_residual(const MarkedTriangle& in, const MarkedTriangle& out) {
    double worst = 0.0;
    for (const cplx& r : correspondence_residual(correspondence_point(in, out))) worst = std::max(worst, std::abs(r));
    return worst;
}

// Fixed classes [z : 1] of either branch: u = -z(z+1)/(2z-1) solves
// u^2 + (z+1)u + z^2+z+1 = 0; cleared of denominators this is a quartic in z.
cplx fixed_point_quartic(cplx z) {
    const cplx a = z + 1.0, b = 2.0 * z - 1.0;
    return z * z * a * a - z * a * a * b + (z * z + z + 1.0) * b * b;
}

}  // namespace

TEST(Tr3Ball, Shape) {
    for (std::size_t r = 0; r <= 5; ++r) {
        Tr3Ball ball(r);
        const std::size_t rings = (std::size_t{1} << r) - 1;
        EXPECT_EQ(ball.size(), 3 + 6 * rings);
        EXPECT_EQ(ball.selector_count(), 3 * rings);
        EXPECT_EQ(ball.triangles().size(), 1 + 3 * rings);
        std::vector<int> membership(ball.size(), 0);
        for (const auto& t : ball.triangles())
            for (Vertex v : t.vertices) ++membership[v];
        for (Vertex v = 0; v < ball.size(); ++v) {
            if (ball.boundary()[v]) {
                EXPECT_EQ(ball.graph()->valency(v), 2u);
                EXPECT_EQ(membership[v], 1);
            } else {
                EXPECT_EQ(ball.graph()->valency(v), 4u);
                EXPECT_EQ(membership[v], 2);
            }
        }
    }
    Tr3Ball b(2);
    EXPECT_EQ(b.graph()->id(b.triangles()[b.triangle_index({1, "a"})].vertices[0]), "1:a");
    EXPECT_EQ(b.graph()->id(b.triangles()[b.triangle_index({1, "a"})].vertices[1]), "1:aa");
    EXPECT_EQ(*b.parent(b.triangle_index({2, "b"})), b.triangle_index({2, ""}));
    EXPECT_THROW(Tr3Ball(30), resource_cap_error);
}

TEST(Tr3Ball, DualOfTheTree) {
    for (std::size_t r = 0; r <= 4; ++r) {
        Tr3Ball ball(r);
        auto tree = regular_tree_ball(3, r + 1);
        auto dual = line_graph(*tree.graph);
        ASSERT_EQ(dual->size(), ball.size());
        auto a = to_boost(*ball.graph()), b = to_boost(*dual);
        EXPECT_TRUE(boost::isomorphism(a, b)) << "radius " << r;
    }
    // and not isomorphic to a differently sized neighbour
    auto a = to_boost(*Tr3Ball(2).graph());
    auto b = to_boost(*line_graph(*regular_tree_ball(3, 2).graph));
    EXPECT_FALSE(boost::num_vertices(a) == boost::num_vertices(b) && boost::isomorphism(a, b));
}

TEST(StepM, Examples) {
    auto out = step_M({0.0, 1.0, -1.0}, 1);
    EXPECT_LT(std::abs(out.p - cplx(0, -1)), 1e-15);
    EXPECT_LT(std::abs(out.e - cplx(0, -1)), 1e-15);
    EXPECT_LT(std::abs(out.f - cplx(0, -2)), 1e-15);
    for (int br : {1, 2}) {
        auto z = step_M({cplx(3, 1), 0.0, 0.0}, br);
        EXPECT_EQ(z.p, cplx(3, 1));
        EXPECT_EQ(z.e, cplx(0.0));
        EXPECT_EQ(z.f, cplx(0.0));
    }
    const double r2 = std::sqrt(2.0);
    const cplx lam(0.7, -1.3);
    const MarkedTriangle sing{1.0, lam * cplx(1, -r2), lam * cplx(1, r2)};
    auto m1 = step_M(sing, 1), m2 = step_M(sing, 2);
    EXPECT_LT(std::abs(m1.p - m2.p) + std::abs(m1.e - m2.e) + std::abs(m1.f - m2.f), 1e-6);
    EXPECT_THROW(step_M(sing, 3), input_error);
}

TEST(StepM, QuadricClosureAndConsistency) {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 10000; ++trial) {
        const MarkedTriangle t{random_complex(rng), random_complex(rng), random_complex(rng)};
        const double s = 1.0 + std::abs(t.p) + std::abs(t.e) + std::abs(t.f);
        auto o1 = step_M(t, 1), o2 = step_M(t, 2);
        ASSERT_LT(max_residual(t, o1), 1e-12 * s * s);
        ASSERT_LT(max_residual(t, o2), 1e-12 * s * s);
        auto uv = step_M_pair(o1);
        ASSERT_LT(std::abs(t.e + t.f + uv.sum()), 1e-12 * s);
        ASSERT_LT(std::abs(t.e * t.e + t.f * t.f + uv.first * uv.first + uv.second * uv.second), 1e-12 * s * s);
        ASSERT_LT(pair_distance({step_M_pair(o1).first, step_M_pair(o2).first}, solve_pair2(t.e, t.f)), 1e-10 * s);
        // literal recombination (p - u, -u, -u + v)
        const cplx u = uv.first, v = uv.second;
        ASSERT_LT(std::abs(o1.p - (t.p - u)) + std::abs(o1.e + u) + std::abs(o1.f - (v - u)), 1e-12 * s);
        // homogeneity as unordered branch pairs
        const cplx lam = random_complex(rng);
        auto h1 = step_M({lam * t.p, lam * t.e, lam * t.f}, 1), h2 = step_M({lam * t.p, lam * t.e, lam * t.f}, 2);
        const double direct = std::abs(h1.f - lam * o1.f) + std::abs(h2.f - lam * o2.f);
        const double crossed = std::abs(h1.f - lam * o2.f) + std::abs(h2.f - lam * o1.f);
        ASSERT_LT(std::min(direct, crossed), 1e-10 * s * (1.0 + std::abs(lam)));
    }
}

TEST(Correspondence, Examples) {
    for (const cplx& r : correspondence_residual({0.0, 1.0, -1.0, cplx(0, -1), cplx(0, -1), cplx(0, -2)}))
        EXPECT_LT(std::abs(r), 1e-15);
    for (const cplx& r : correspondence_residual({cplx(2, 2), 0.0, 0.0, cplx(2, 2), 0.0, 0.0})) EXPECT_EQ(r, cplx(0.0));
    // the geometric base p + u does not satisfy the third equation
    auto r = correspondence_residual({0.0, 1.0, -1.0, cplx(0, 1), cplx(0, -1), cplx(0, -2)});
    EXPECT_GT(std::abs(r[2]), 1.0);
}

TEST(Involution, ExamplesAndRandom) {
    EXPECT_TRUE(involution_check(1.0, -1.0));
    EXPECT_TRUE(involution_check(0.0, 0.0));
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100000; ++trial) ASSERT_TRUE(involution_check(random_complex(rng), random_complex(rng)));
}

TEST(SingularLocus, Distance) {
    const double r2 = std::sqrt(2.0);
    EXPECT_LT(singular_locus_distance(cplx(1, -r2), cplx(1, r2)), 1e-15);
    EXPECT_LT(singular_locus_distance(cplx(1, r2), cplx(1, -r2)), 1e-15);
    EXPECT_NEAR(singular_locus_distance(1.0, 1.0), 4.0, 1e-15);
    EXPECT_LT(std::abs(pair2_discriminant(cplx(1, -r2), cplx(1, r2))), 1e-12);
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 1000; ++trial) {
        const cplx e = random_complex(rng), f = random_complex(rng), lam = random_complex(rng);
        EXPECT_NEAR(singular_locus_distance(lam * e, lam * f), singular_locus_distance(e, f), 1e-10);
    }
    for (const cplx& z : singular_ratios()) EXPECT_LT(singular_locus_distance(z, 1.0), 1e-15);
    EXPECT_THROW(singular_locus_distance(0.0, 0.0), input_error);
}

TEST(Monodromy, Loops) {
    const auto [s, n] = singular_ratios();
    EXPECT_EQ(branch_monodromy_circle(s, 0.3, 1000), Monodromy::transposition);
    EXPECT_EQ(branch_monodromy_circle(n, 0.3, 1000), Monodromy::transposition);
    EXPECT_EQ(branch_monodromy_circle(cplx(2.0, 0.5), 0.3, 1000), Monodromy::identity);
    EXPECT_EQ(branch_monodromy_circle(cplx(-1.0 / 3.0, 0.0), 1.5, 1000), Monodromy::identity);
    EXPECT_THROW(branch_monodromy_circle(s + 0.3, 0.3, 1000), numerical_failure);
    EXPECT_THROW(branch_monodromy_circle(s, 0.3, 2), input_error);
}

TEST(ExtendTr3, Examples) {
    Tr3Ball ball(3);
    auto c = extend_tr3({cplx(4, -1), 0.0, 0.0}, ball, BranchSelector::random(ball, 1));
    for (Vertex v = 0; v < ball.size(); ++v) EXPECT_EQ(c.value(v), cplx(4, -1));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto f = extend_tr3({0.0, 1.0, -1.0}, ball, BranchSelector::random(ball, seed));
        auto res = is_holomorphic(f);
        EXPECT_TRUE(res.verdict);
        EXPECT_LT(res.max_residual, 1e-10);
    }
    Tr3Ball two(2);
    const MarkedTriangle generic{cplx(0.2, 0.1), cplx(1.0, 0.3), cplx(-0.4, 0.8)};
    auto f0 = extend_tr3(generic, two, BranchSelector::from_bits(two, 0));
    auto f1 = extend_tr3(generic, two, BranchSelector::from_bits(two, 5));
    double diff = 0.0;
    for (Vertex v = 0; v < two.size(); ++v) diff = std::max(diff, std::abs(f0.value(v) - f1.value(v)));
    EXPECT_GT(diff, 1e-3);
    EXPECT_THROW(extend_tr3(generic, two, BranchSelector{}), input_error);
}

TEST(ExtendTr3, ValuesDependOnlyOnAncestorSelectors) {
    Tr3Ball ball(2);
    const MarkedTriangle t{0.0, cplx(1.0, 0.2), cplx(-0.3, 1.1)};
    const auto& tris = ball.triangles();
    std::vector<ComplexFunction> all;
    for (std::uint64_t bits = 0; bits < 512; ++bits) all.push_back(extend_tr3(t, ball, BranchSelector::from_bits(ball, bits)));
    for (std::size_t k = 0; k < 9; ++k) {
        const std::size_t tk = k + 1;
        // vertices created by triangle tk or its descendants
        std::vector<bool> affected(ball.size(), false);
        for (std::size_t s = 1; s < tris.size(); ++s) {
            std::optional<std::size_t> a = s;
            while (a && *a != tk) a = ball.parent(*a);
            if (a) affected[tris[s].vertices[1]] = affected[tris[s].vertices[2]] = true;
        }
        for (std::uint64_t bits = 0; bits < 512; ++bits) {
            const auto& f = all[bits];
            const auto& g = all[bits ^ (std::uint64_t{1} << k)];
            for (Vertex v = 0; v < ball.size(); ++v)
                if (!affected[v]) ASSERT_EQ(f.value(v), g.value(v));
        }
    }
}

TEST(Projective, HomogeneityAndOrbit) {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 1000; ++trial) {
        const cplx e = random_complex(rng), f = random_complex(rng), lam = random_complex(rng);
        for (int br : {1, 2}) {
            auto a = projective_step(ProjectivePoint::of(e, f), br);
            auto b = projective_step(ProjectivePoint::of(lam * e, lam * f), br);
            ASSERT_LT(chordal_distance(a, b), 1e-9);
        }
    }
    MarkedTriangle cur{0.0, 1.0, -1.0};
    for (int k = 0; k < 100; ++k) {
        const auto rep = ProjectivePoint::of(cur.e, cur.f);
        const MarkedTriangle in{0.0, rep.e, rep.f};
        auto out = step_M(in, 1 + k % 2);
        ASSERT_LT(max_residual(in, out), 1e-12);
        cur = out;
    }
    EXPECT_THROW(ProjectivePoint::of(0.0, 0.0), input_error);
}

TEST(Projective, FixedPoints) {
    auto fps = find_fixed_points();
    ASSERT_FALSE(fps.empty());
    for (const auto& fp : fps) {
        const cplx z = fp.point.ratio();
        EXPECT_LT(std::abs(fixed_point_quartic(z)), 1e-8 * (1.0 + std::pow(std::abs(z), 4)));
        EXPECT_LT(chordal_distance(projective_step(fp.point, fp.branch), fp.point), 1e-9);
    }
    // every root of the quartic is a fixed class of some branch
    std::vector<cplx> c(5);
    // coefficients by interpolation at five points
    const std::array<cplx, 5> xs{0.0, 1.0, -1.0, 2.0, cplx(0, 1)};
    std::vector<std::vector<cplx>> m(5, std::vector<cplx>(6));
    for (std::size_t i = 0; i < 5; ++i) {
        cplx pw = 1.0;
        for (std::size_t k = 0; k < 5; ++k, pw *= xs[i]) m[i][k] = pw;
        m[i][5] = fixed_point_quartic(xs[i]);
    }
    for (std::size_t col = 0; col < 5; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col; i < 5; ++i)
            if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
        std::swap(m[col], m[piv]);
        for (std::size_t i = 0; i < 5; ++i) {
            if (i == col) continue;
            const cplx k = m[i][col] / m[col][col];
            for (std::size_t q = col; q < 6; ++q) m[i][q] -= k * m[col][q];
        }
    }
    for (std::size_t k = 0; k < 5; ++k) c[k] = m[k][5] / m[k][k];
    EXPECT_LT(std::abs(c[4] - 3.0), 1e-9);
    std::vector<cplx> monic{c[0] / c[4], c[1] / c[4], c[2] / c[4], c[3] / c[4], 1.0};
    for (const cplx& z : find_roots(monic)) {
        bool found = false;
        for (const auto& fp : fps) found = found || chordal_distance(fp.point, ProjectivePoint::of(z, 1.0)) < 1e-6;
        EXPECT_TRUE(found) << z << " of " << fps.size();
    }
}

TEST(Cloud, ExhaustiveAndSampled) {
    const MarkedTriangle t{cplx(0.1, 0.0), cplx(1.0, 0.2), cplx(-0.3, 1.1)};
    auto zero = ball_image_cloud_exhaustive(t, 0);
    ASSERT_EQ(zero.size(), 3u);
    EXPECT_EQ(zero[1].z, t.p + t.e);

    auto cloud = ball_image_cloud_exhaustive(t, 3);
    EXPECT_EQ(cloud.size(), 3u + 3u * (4u + 16u + 64u));
    // first ring: per direction, the two vertices carry the same unordered pair in both states
    std::vector<cplx> ring;
    for (const auto& p : cloud)
        if (p.depth == 1) ring.push_back(p.z);
    ASSERT_EQ(ring.size(), 12u);
    for (std::size_t i = 0; i < 3; ++i) {
        const UnorderedPair s0{ring[4 * i], ring[4 * i + 1]}, s1{ring[4 * i + 2], ring[4 * i + 3]};
        EXPECT_LT(pair_distance(s0, s1.swapped()), 1e-12);
        EXPECT_LT(std::abs(s0.first - s1.second), 1e-12);
    }
    auto sampled = ball_image_cloud_sampled(t, 3, 50, 5);
    EXPECT_EQ(sampled.size(), 50u * Tr3Ball(3).size());
    for (const auto& p : sampled) {
        bool hit = false;
        for (const auto& q : cloud) hit = hit || (q.depth == p.depth && std::abs(q.z - p.z) < 1e-12);
        ASSERT_TRUE(hit);
    }
    EXPECT_THROW(ball_image_cloud_exhaustive(t, 14), resource_cap_error);
}

TEST(Cloud, RelatedPairs) {
    const MarkedTriangle t{0.0, 1.0, cplx(0.2, 0.9)};
    auto pairs = sample_related_pairs(t, 3, 20, 11);
    ASSERT_EQ(pairs.size(), 20u);
    for (const auto& [a, b] : pairs) {
        // both states come from holomorphic data, so both are non-degenerate scalings of related classes
        EXPECT_GT(std::abs(a.e) + std::abs(a.f), 0.0);
        EXPECT_GT(std::abs(b.e) + std::abs(b.f), 0.0);
    }
}
