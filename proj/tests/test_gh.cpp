#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace funclust;

namespace {

FiniteMetricSpace two_point(double d) { return validate_metric({{0, d}, {d, 0}}, false); }

std::string error_code(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "none";
}

FiniteMetricSpace sub_space(const FiniteMetricSpace& x, const std::vector<std::size_t>& keep) {
    SquareMatrix d(keep.size());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        labels.push_back(x.label(keep[i]));
        for (std::size_t j = 0; j < keep.size(); ++j) {
            d(i, j) = x(keep[i], keep[j]);
        }
    }
    return FiniteMetricSpace::unchecked(labels, d, false);
}

}  // namespace

TEST(Distortion, Examples) {
    const auto x = validate_metric({{0, 4, 3}, {4, 0, 5}, {3, 5, 0}}, false);
    const auto y = validate_metric({{0, 2, 3}, {2, 0, 4}, {3, 4, 0}}, false);
    EXPECT_EQ(distortion({{0, 0}, {1, 1}, {2, 2}}, x, x), 0.0);
    EXPECT_EQ(distortion({{0, 0}, {1, 1}, {2, 2}}, x, y), 2.0);
    EXPECT_EQ(distortion({{0, 0}, {1, 1}}, two_point(1), two_point(3)), 2.0);
    EXPECT_EQ(error_code([&] { distortion({{0, 0}, {1, 1}}, x, y); }), "NotACorrespondence");
    EXPECT_EQ(error_code([&] { distortion({{0, 5}}, two_point(1), two_point(1)); }), "NotACorrespondence");
}

TEST(GhExact, TwoPointSpaces) {
    EXPECT_EQ(gh_exact(two_point(1), two_point(3)).value, 2.0);
    EXPECT_EQ(gh_exact(two_point(1), two_point(4)).value, 3.0);
    EXPECT_EQ(gh_exact(two_point(2), two_point(2)).value, 0.0);
}

TEST(GhExact, OnePointSpaceGivesDiameter) {
    const auto point = validate_metric(std::vector<std::vector<double>>{{0.0}}, false);
    auto rng = make_rng(60);
    for (int t = 0; t < 20; ++t) {
        const auto x = random_metric_space(rng, 1 + t % 6);
        EXPECT_EQ(gh_exact(point, x).value, x.diameter());
    }
}

TEST(GhExact, MatchesBruteForce) {
    auto rng = make_rng(61);
    for (int t = 0; t < 60; ++t) {
        const std::size_t nx = 1 + t % 4;
        const std::size_t ny = 1 + (t / 4) % 4;
        if (nx * ny > 12 && t % 3 != 0) {
            continue;
        }
        const auto x = random_metric_space(rng, nx);
        const auto y = random_metric_space(rng, ny);
        const auto exact = gh_exact(x, y);
        EXPECT_TRUE(approx_equal(exact.value, oracle::gh_bruteforce(x, y))) << nx << "x" << ny;
        EXPECT_EQ(distortion(exact.witness, x, y), exact.value);
        EXPECT_LE(gh_lower_bound(x, y), exact.value + 1e-12);
    }
}

TEST(GhExact, IsAPseudometric) {
    auto rng = make_rng(62);
    for (int t = 0; t < 40; ++t) {
        const auto a = random_metric_space(rng, 1 + t % 3);
        const auto b = random_metric_space(rng, 1 + (t + 1) % 3);
        const auto c = random_metric_space(rng, 1 + (t + 2) % 3);
        const double ab = gh_exact(a, b).value;
        EXPECT_EQ(gh_exact(a, a).value, 0.0);
        EXPECT_TRUE(approx_equal(ab, gh_exact(b, a).value));
        EXPECT_LE(ab, gh_exact(a, c).value + gh_exact(c, b).value + 1e-9);
    }
}

TEST(GhExact, BelowEveryCorrespondence) {
    auto rng = make_rng(63);
    for (int t = 0; t < 50; ++t) {
        const std::size_t nx = 1 + t % 5;
        const std::size_t ny = 1 + (t / 5) % 5;
        const auto x = random_metric_space(rng, nx);
        const auto y = random_metric_space(rng, ny);
        const double value = gh_exact(x, y).value;
        Correspondence r;
        for (std::size_t i = 0; i < nx; ++i) {
            r.emplace_back(i, std::uniform_int_distribution<std::size_t>(0, ny - 1)(rng));
        }
        for (std::size_t j = 0; j < ny; ++j) {
            r.emplace_back(std::uniform_int_distribution<std::size_t>(0, nx - 1)(rng), j);
        }
        EXPECT_LE(value, distortion(r, x, y) + 1e-12);
    }
}

TEST(GhExact, Limits) {
    auto rng = make_rng(64);
    const auto x = random_metric_space(rng, 6);
    EXPECT_EQ(error_code([&] { gh_exact(x, x); }), "TooLarge");
    EXPECT_NO_THROW(gh_exact(x, x, 12));
    EXPECT_EQ(error_code([&] { gh_exact(FiniteMetricSpace{}, x); }), "EmptySpace");
    EXPECT_EQ(error_code([&] { gh_lower_bound(x, FiniteMetricSpace{}); }), "EmptySpace");
}

TEST(SubsetDistances, Examples) {
    PointCloud line(1);
    for (const double v : {0.0, 1.0, 3.0, 7.0}) {
        const double p[1] = {v};
        line.add(p);
    }
    const std::vector<std::size_t> a{0, 1};
    const std::vector<std::size_t> b{2, 3};
    const std::vector<std::size_t> all{0, 1, 2, 3};
    EXPECT_EQ(hausdorff(line, std::span<const std::size_t>(a), std::span<const std::size_t>(b)), 6.0);
    EXPECT_EQ(set_distance(line, std::span<const std::size_t>(a), std::span<const std::size_t>(b)), 2.0);
    EXPECT_EQ(covering_radius(line, std::span<const std::size_t>(a)), 6.0);
    EXPECT_EQ(covering_radius(line, std::span<const std::size_t>(all)), 0.0);
    const std::vector<std::size_t> empty;
    const std::vector<std::size_t> bad{9};
    EXPECT_EQ(error_code([&] { covering_radius(line, std::span<const std::size_t>(empty)); }), "EmptySubset");
    EXPECT_EQ(error_code([&] { covering_radius(line, std::span<const std::size_t>(bad)); }), "BadShape");
}

TEST(SubsetDistances, SubspaceWithinTwiceHausdorff) {
    auto rng = make_rng(65);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + t % 5;
        const auto x = random_metric_space(rng, n);
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < n; ++i) {
            if (keep.empty() || std::bernoulli_distribution(0.5)(rng)) {
                keep.push_back(i);
            }
        }
        const double radius = covering_radius(x, std::span<const std::size_t>(keep));
        EXPECT_LE(gh_exact(sub_space(x, keep), x, 12).value, 2 * radius + 1e-9);
    }
}

TEST(EpsilonContraction, HoldsOnRandomPairs) {
    auto rng = make_rng(66);
    for (int t = 0; t < 60; ++t) {
        const auto x = random_metric_space(rng, 1 + t % 5);
        const auto y = random_metric_space(rng, 1 + (t / 5) % 5);
        const auto check = check_epsilon_contraction(x, y);
        EXPECT_TRUE(check) << check.lhs << " > " << check.rhs;
    }
    const auto chain = validate_metric({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, false);
    const auto check = check_epsilon_contraction(chain, validate_metric(std::vector<std::vector<double>>{{0.0}}, false));
    EXPECT_EQ(check.rhs, 2.0);
    EXPECT_EQ(check.lhs, 1.0);
}
