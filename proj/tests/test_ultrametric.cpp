#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace funclust;

TEST(Epsilon, TwoPointSpace) {
    EXPECT_EQ(epsilon_metric(validate_metric({{0, 3}, {3, 0}}, false))(0, 1), 3.0);
}

TEST(Epsilon, ChainShortcut) {
    const auto e = epsilon_metric(validate_metric({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, false));
    EXPECT_EQ(e(0, 2), 1.0);
}

TEST(Epsilon, ComponentSpace) {
    const double w13 = 4, w23 = 6, w12 = 11;
    SquareMatrix w(3);
    w.set_symmetric(0, 2, w13);
    w.set_symmetric(1, 2, w23);
    w.set_symmetric(0, 1, w12);
    EXPECT_EQ(epsilon_metric(path_metric(w))(0, 1), std::max(w13, w23));
}

TEST(Epsilon, MatchesMinimaxAndMergeHeightOracles) {
    auto rng = make_rng(41);
    for (int t = 0; t < 150; ++t) {
        const auto x = random_metric_space(rng, 1 + t % 7);
        const auto e = epsilon_metric(x);
        const auto closure = oracle::minimax_closure(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t j = 0; j < x.size(); ++j) {
                EXPECT_EQ(e(i, j), closure[i][j]);
                if (i != j) {
                    EXPECT_EQ(e(i, j), oracle::merge_height(x, i, j));
                }
            }
        }
    }
}

TEST(Epsilon, Properties) {
    auto rng = make_rng(42);
    for (int t = 0; t < 200; ++t) {
        const auto x = random_metric_space(rng, 1 + t % 12);
        const auto e = epsilon_metric(x);
        EXPECT_TRUE(check_ultrametric(e.space()));
        EXPECT_EQ(epsilon_metric(e.space()).space(), e.space());
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t j = 0; j < x.size(); ++j) {
                EXPECT_LE(e(i, j), x(i, j));
                if (i != j) {
                    EXPECT_GT(e(i, j), 0.0);
                }
            }
        }
    }
    EXPECT_THROW(epsilon_metric(FiniteMetricSpace{}), Error);
}

TEST(CheckUltrametric, Examples) {
    const auto triangle = validate_metric({{0, 3, 5}, {3, 0, 4}, {5, 4, 0}}, false);
    const auto verdict = check_ultrametric(triangle);
    ASSERT_FALSE(verdict);
    const auto [x, y, z] = *verdict.violation;
    EXPECT_GT(triangle(x, z), std::max(triangle(x, y), triangle(y, z)));
    EXPECT_TRUE(check_ultrametric(validate_metric({{0, 9}, {9, 0}}, false)));
    EXPECT_THROW(Ultrametric::from_space(triangle), Error);
    EXPECT_NO_THROW(Ultrametric::from_space(validate_metric({{0, 2, 2}, {2, 0, 1}, {2, 1, 0}}, false)));
}

TEST(Roundtrip, DendrogramAndEpsilonAgree) {
    EXPECT_TRUE(dendrogram_ultrametric_roundtrip(validate_metric({{0, 2}, {2, 0}}, false)));
    auto rng = make_rng(43);
    for (int t = 0; t < 200; ++t) {
        const auto x = random_metric_space(rng, 1 + t % 10);
        EXPECT_TRUE(dendrogram_ultrametric_roundtrip(x));
        const double lambda = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
        const auto scaled = epsilon_metric(scale_metric(x, lambda));
        const auto base = epsilon_metric(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t j = 0; j < x.size(); ++j) {
                EXPECT_TRUE(approx_equal(scaled(i, j), lambda * base(i, j)));
            }
        }
    }
}
