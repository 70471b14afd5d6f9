#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace funclust;

namespace {

std::string error_code(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "none";
}

}  // namespace

TEST(ParseShape, Accepted) {
    EXPECT_EQ(parse_shape("circle").circle_radius, 1.0);
    EXPECT_EQ(parse_shape("circle:2.5").circle_radius, 2.5);
    EXPECT_EQ(parse_shape("disk:1,2,3").disks.size(), 1U);
    EXPECT_EQ(parse_shape("blobs:3").component_count(), 2U);
    const auto shape = parse_shape("disks3:4,6,11");
    ASSERT_EQ(shape.disks.size(), 3U);
    const auto gap = [&](std::size_t a, std::size_t b) {
        const auto& p = shape.disks[a];
        const auto& q = shape.disks[b];
        return std::hypot(p.cx - q.cx, p.cy - q.cy) - p.radius - q.radius;
    };
    EXPECT_NEAR(gap(0, 2), 4.0, 1e-12);
    EXPECT_NEAR(gap(1, 2), 6.0, 1e-12);
    EXPECT_NEAR(gap(0, 1), 11.0, 1e-12);
}

TEST(ParseShape, Rejected) {
    for (const char* bad : {"square", "circle:-1", "circle:x", "disk:1,2", "blobs:0", "disks3:1,1,9", "circle:1,2",
                            "disk:0,0,1e999"}) {
        EXPECT_EQ(error_code([&] { parse_shape(bad); }), "BadSpec") << bad;
    }
}

TEST(Sampling, SizesLabelsAndReproducibility) {
    const auto spec = parse_shape("disks3:4,6,11");
    const auto s = sample_shape(spec, 30, 5);
    EXPECT_EQ(s.sample.size(), 30U);
    EXPECT_EQ(s.second_sample.size(), 30U);
    EXPECT_EQ(s.component.size(), s.ambient.size());
    EXPECT_EQ(s.component_count, 3U);
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_FALSE(s.members(c).empty());
    }
    // Every sample point lies in its labelled disk.
    for (const std::size_t i : s.sample) {
        const auto& disk = spec.disks[s.component[i]];
        EXPECT_LE(std::hypot(s.ambient.point(i)[0] - disk.cx, s.ambient.point(i)[1] - disk.cy),
                  disk.radius + 1e-12);
    }
    const auto again = sample_shape(spec, 30, 5);
    EXPECT_EQ(again.sample, s.sample);
    EXPECT_EQ(covering_radius(again.ambient, again.sample), covering_radius(s.ambient, s.sample));
    EXPECT_EQ(error_code([&] { sample_shape(spec, 0, 1); }), "BadSpec");
}

TEST(Sampling, CoveringRadiusShrinks) {
    const auto spec = parse_shape("circle");
    SamplingOptions options;
    options.net_size = 4000;
    double previous = std::numeric_limits<double>::infinity();
    for (const std::size_t n : {25, 50, 100}) {
        const auto s = sample_shape(spec, n, 3, options);
        const double r = covering_radius(s.ambient, s.sample);
        EXPECT_LT(r, previous) << n;
        previous = r;
    }
    // A single point on the unit circle is at distance 2 from its antipode.
    const auto one = sample_shape(spec, 1, 3, options);
    EXPECT_NEAR(covering_radius(one.ambient, one.sample), 2.0, 1e-3);
}

TEST(Sampling, IidModeAlsoWorks) {
    SamplingOptions options;
    options.mode = SamplingMode::iid;
    const auto s = sample_shape(parse_shape("blobs:2"), 40, 9, options);
    EXPECT_EQ(s.sample.size(), 40U);
    EXPECT_LT(covering_radius(s.ambient, s.sample), 1.0);
}

TEST(ComponentSpace, ThreeDiskGapsAndPathMetric) {
    const auto s = sample_shape(parse_shape("disks3:4,6,11"), 10, 1);
    const auto a = component_space(s);
    EXPECT_EQ(a.labels(), (std::vector<std::string>{"a1", "a2", "a3"}));
    // The net resolves each gap to within its spacing.
    const double tau = net_spacing(s.ambient, s.ambient.size() - 20);
    EXPECT_NEAR(a(0, 2), 4.0, tau);
    EXPECT_NEAR(a(1, 2), 6.0, tau);
    EXPECT_NEAR(a(0, 1), 10.0, 2 * tau);
    EXPECT_LE(a(0, 1), a(0, 2) + a(1, 2) + 1e-12);
    EXPECT_NEAR(component_separation(s), 4.0, tau);
}

TEST(ComponentSpace, SingleComponentAndMissingLabels) {
    const auto s = sample_shape(parse_shape("circle"), 5, 1);
    EXPECT_EQ(component_space(s).size(), 1U);
    EXPECT_TRUE(std::isinf(component_separation(s)));
    AmbientSample bare;
    bare.ambient = PointCloud(2);
    EXPECT_EQ(error_code([&] { component_space(bare); }), "MissingLabels");
}

TEST(ComponentSpace, TwoBlobs) {
    const auto s = sample_shape(parse_shape("blobs:3"), 20, 2);
    const auto a = component_space(s);
    ASSERT_EQ(a.size(), 2U);
    EXPECT_NEAR(a(0, 1), 3.0, net_spacing(s.ambient, s.ambient.size() - 40));
}

TEST(NearestNeighbour, CoversBothSidesWithinTwiceTheRadii) {
    const auto s = sample_shape(parse_shape("circle"), 20, 4);
    const auto relation = nearest_neighbour_correspondence(s.ambient, s.sample, s.second_sample);
    EXPECT_NO_THROW(validate_correspondence(relation, 20, 20));
    const auto x = s.ambient.to_metric_space(s.sample);
    const auto y = s.ambient.to_metric_space(s.second_sample);
    const double r = covering_radius(s.ambient, s.sample) + covering_radius(s.ambient, s.second_sample);
    EXPECT_LE(distortion(relation, x, y), 2 * r + 1e-12);
}

TEST(Stability, RowsSatisfyTheBound) {
    const std::vector<std::size_t> sizes{3, 5, 20, 60};
    const std::vector<std::uint64_t> seeds{1, 2};
    for (const char* shape : {"circle", "disks3:4,6,11", "blobs:1"}) {
        const auto rows = stability_experiment(parse_shape(shape), sizes, seeds);
        ASSERT_EQ(rows.size(), 8U);
        for (const auto& row : rows) {
            EXPECT_TRUE(row.pass) << shape << " n=" << row.n << ": " << row.left << " > " << row.bound;
            EXPECT_EQ(row.exact, row.n <= 5);
            EXPECT_EQ(row.bound, 2 * (row.covering + row.second_covering));
        }
    }
}

TEST(Convergence, DistortionFallsBelowTwiceTheRadius) {
    const std::vector<std::size_t> sizes{30, 60, 120};
    const std::vector<std::uint64_t> seeds{7};
    const auto table = convergence_experiment(parse_shape("disks3:4,6,11"), sizes, seeds);
    ASSERT_EQ(table.rows.size(), 3U);
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& row : table.rows) {
        EXPECT_TRUE(row.pass) << row.n;
        EXPECT_TRUE(row.sandwich) << row.n;
        EXPECT_LE(row.distortion, row.bound);
        EXPECT_LT(row.distortion, previous);
        previous = row.distortion;
    }
    EXPECT_GT(table.net_spacing, 0.0);
    EXPECT_LT(table.net_spacing, 0.1);
}

TEST(Convergence, SparseSampleRejected) {
    const std::vector<std::size_t> sizes{3};
    const std::vector<std::uint64_t> seeds{1};
    EXPECT_EQ(error_code([&] { convergence_experiment(parse_shape("blobs:0.2"), sizes, seeds); }), "SampleTooSparse");
}
