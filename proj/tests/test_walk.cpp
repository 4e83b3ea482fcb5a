#include <gtest/gtest.h>

#include <dholo/t3.hpp>
#include <dholo/walk.hpp>

using namespace dholo;

TEST(WalkShift, MatrixFromGeometry) {
    WalkShift shift;
    const WalkShift::Matrix printed{{{0, 1, 0, 0, 0, 1},
                                     {1, 0, 1, 0, 0, 0},
                                     {0, 1, 0, 1, 0, 0},
                                     {0, 0, 1, 0, 1, 0},
                                     {0, 0, 0, 1, 0, 1},
                                     {1, 0, 0, 0, 1, 0}}};
    EXPECT_EQ(shift.matrix(), printed);
    for (const auto& row : shift.matrix()) EXPECT_EQ(row[0] + row[1] + row[2] + row[3] + row[4] + row[5], 2);
    for (int s = 0; s < 6; ++s) EXPECT_FALSE(shift.admissible(s, (s + 3) % 6));
}

TEST(WalkShift, WordCounts) {
    WalkShift shift;
    for (int s = 0; s < 6; ++s)
        for (std::size_t n = 0; n <= 20; ++n) EXPECT_EQ(shift.count_words(n, s), std::uint64_t{1} << n);
}

TEST(WalkShift, SymbolsAndVectors) {
    EXPECT_EQ(WalkShift::vector(0), EisensteinNumber(1, 0));
    EXPECT_EQ(WalkShift::vector(1), EisensteinNumber(0, -1));
    EXPECT_EQ(WalkShift::vector(2), EisensteinNumber(-1, -1));
    for (int s = 0; s < 6; ++s) EXPECT_EQ(WalkShift::symbol_of(WalkShift::vector(s)), s);
    EXPECT_THROW(WalkShift::symbol_of(EisensteinNumber(2, 0)), input_error);
    EXPECT_EQ(WalkShift::names()[4], "-v");
}

TEST(WalkSample, NeverEmitsForbiddenTransitions) {
    WalkShift shift;
    auto w = walk_sample(shift, 1'000'000, 7);
    ASSERT_EQ(w.steps.size(), 1'000'000u);
    std::array<std::size_t, 6> freq{};
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        ++freq[static_cast<std::size_t>(w.steps[i].symbol)];
        if (i) ASSERT_TRUE(shift.admissible(w.steps[i - 1].symbol, w.steps[i].symbol)) << i;
    }
    for (auto f : freq) EXPECT_NEAR(static_cast<double>(f) / 1e6, 1.0 / 6.0, 0.01);
    EXPECT_THROW(walk_sample(shift, 0, 1), input_error);
}

TEST(WalkSample, StaysOnTheTilingAndIsReproducible) {
    WalkShift shift;
    HexLattice lat({}, {1, 0}, 60);
    auto w = walk_sample(shift, 50, 3);
    for (const auto& s : w.steps) {
        auto z = EisensteinNumber::snap(s.position, 1e-9);
        ASSERT_TRUE(z);
        EXPECT_TRUE(lat.contains(*z));
    }
    auto again = walk_sample(shift, 50, 3);
    for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(again.steps[i].position, w.steps[i].position);
    EXPECT_NEAR(w.final_distance(), std::abs(w.steps.back().position), 0.0);
}

TEST(WalkShift, GeodesicImagesAreAdmissible) {
    WalkShift shift;
    std::mt19937_64 rng(61);
    auto ball = TreeBall::rooted(2, 10);
    for (int trial = 0; trial < 200; ++trial) {
        auto vals = extend_values(ball, EisensteinNumber{}, EisensteinNumber(1, 0), ChoiceAssignment::random(ball, rng()));
        TreeAddress s = root_address();
        std::vector<int> word{WalkShift::symbol_of(vals[ball.root()] - vals[ball.back_root()])};
        for (int k = 0; k < 10; ++k) {
            TreeAddress next = s;
            next.word.push_back((rng() & 1U) ? 'b' : 'a');
            word.push_back(WalkShift::symbol_of(vals[ball.index(next)] - vals[ball.index(s)]));
            s = next;
        }
        ASSERT_TRUE(shift.admissible(word));
    }
}
