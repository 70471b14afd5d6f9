#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace funclust;

namespace {

Partition blocks(std::size_t n, std::vector<std::vector<std::size_t>> b) { return Partition::from_blocks(n, b); }

std::string error_code(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "none";
}

/// Persistent set on {A', B', C'}: discrete, {{A',B'},{C'}} from 1, one block from 2.
PersistentSet three_range_target() {
    return PersistentSet::build({"A'", "B'", "C'"}, Partition::discrete(3),
                                {{1.0, blocks(3, {{0, 1}, {2}})}, {2.0, Partition::single_block(3)}});
}

}  // namespace

TEST(PartitionTest, CanonicalForm) {
    const auto p = Partition::from_assignment(std::vector<std::size_t>{5, 2, 5, 2, 9});
    EXPECT_EQ(p.blocks(), (std::vector<std::vector<std::size_t>>{{0, 2}, {1, 3}, {4}}));
    EXPECT_EQ(p, blocks(5, {{4}, {3, 1}, {2, 0}}));
    EXPECT_EQ(error_code([] { blocks(3, {{0, 1}}); }), "InvalidPartition");
    EXPECT_EQ(error_code([] { blocks(3, {{0, 1}, {1, 2}}); }), "InvalidPartition");
}

TEST(Refines, Examples) {
    EXPECT_TRUE(refines(Partition::discrete(3), blocks(3, {{0, 2}, {1}})));
    EXPECT_TRUE(refines(blocks(3, {{0, 1}, {2}}), Partition::single_block(3)));
    EXPECT_FALSE(refines(blocks(3, {{0, 2}, {1}}), blocks(3, {{0, 1}, {2}})));
    EXPECT_EQ(error_code([] { refines(Partition::discrete(2), Partition::discrete(3)); }), "GroundSetMismatch");
}

TEST(Pullback, Examples) {
    const SetMap f({"A", "B", "C"}, {"A'", "B'", "C'"}, {0, 1, 2});
    EXPECT_EQ(pullback(f, blocks(3, {{0, 1}, {2}})), blocks(3, {{0, 1}, {2}}));
    const auto id = SetMap::identity({"a", "b", "c", "d"});
    const auto p = blocks(4, {{0, 3}, {1, 2}});
    EXPECT_EQ(pullback(id, p), p);
    EXPECT_EQ(error_code([&] { pullback(id, Partition::discrete(3)); }), "GroundSetMismatch");
}

TEST(Pullback, Composes) {
    auto rng = make_rng(8);
    for (int t = 0; t < 100; ++t) {
        const std::size_t a = 1 + t % 5, b = 1 + t % 4, c = 1 + t % 3;
        std::vector<std::size_t> fi(a), gi(b), pid(c);
        for (auto& v : fi) v = std::uniform_int_distribution<std::size_t>(0, b - 1)(rng);
        for (auto& v : gi) v = std::uniform_int_distribution<std::size_t>(0, c - 1)(rng);
        for (auto& v : pid) v = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
        const SetMap f(default_labels(a), default_labels(b), fi);
        const SetMap g(default_labels(b), default_labels(c), gi);
        const auto p = Partition::from_assignment(pid);
        EXPECT_EQ(pullback(compose(g, f), p), pullback(f, pullback(g, p)));
    }
}

TEST(Build, NormalisesSteps) {
    const auto p = PersistentSet::build(default_labels(3), Partition::discrete(3),
                                        {{2.0, Partition::single_block(3)},
                                         {1.0, blocks(3, {{0, 1}, {2}})},
                                         {1.0 + 1e-12, blocks(3, {{0, 1}, {2}})},
                                         {1.5, blocks(3, {{0, 1}, {2}})}});
    EXPECT_EQ(p.breakpoints(), (std::vector<double>{1.0, 2.0}));
    EXPECT_TRUE(p.is_dendrogram());
    EXPECT_EQ(error_code([] {
                  PersistentSet::build(default_labels(3), blocks(3, {{0, 1}, {2}}), {{1.0, blocks(3, {{0, 2}, {1}})}});
              }),
              "NotMonotone");
    EXPECT_EQ(error_code([] {
                  PersistentSet::build(default_labels(2), Partition::discrete(2), {{-1.0, Partition::single_block(2)}});
              }),
              "NegativeScale");
}

TEST(Build, StepAtZeroReplacesInitialPartition) {
    const auto p = PersistentSet::build(default_labels(2), Partition::discrete(2), {{0.0, Partition::single_block(2)}});
    EXPECT_TRUE(p.breakpoints().empty());
    EXPECT_TRUE(p.partitions().front().is_single_block());
}

TEST(ThetaAt, Examples) {
    const auto eta = three_range_target();
    EXPECT_EQ(theta_at(eta, 1.0), blocks(3, {{0, 1}, {2}}));
    EXPECT_EQ(theta_at(eta, 1.999), blocks(3, {{0, 1}, {2}}));
    EXPECT_TRUE(theta_at(eta, 0.999).is_discrete());
    EXPECT_TRUE(theta_at(eta, 2.0).is_single_block());
    EXPECT_EQ(error_code([&] { theta_at(eta, -0.1); }), "NegativeScale");
}

TEST(Preservation, ThreeRangeMapPreserves) {
    const auto theta = PersistentSet::build({"A", "B", "C"}, Partition::discrete(3), {{2.0, Partition::single_block(3)}});
    const SetMap f({"A", "B", "C"}, {"A'", "B'", "C'"}, {0, 1, 2});
    EXPECT_TRUE(is_persistence_preserving(f, theta, three_range_target()));
    EXPECT_EQ(pullback(f, theta_at(three_range_target(), 1.5)), blocks(3, {{0, 1}, {2}}));
}

TEST(Preservation, IdentityPreserves) {
    const auto p = three_range_target();
    EXPECT_TRUE(is_persistence_preserving(SetMap::identity(p.labels()), p, p));
}

TEST(Preservation, ReportsEarliestFailingInterval) {
    // Source merges {0,2} at 3, target merges {0,1} at 2 and everything at 4.
    const auto p = PersistentSet::build(default_labels(3), Partition::discrete(3),
                                        {{3.0, blocks(3, {{0, 2}, {1}})}, {5.0, Partition::single_block(3)}});
    const auto q = PersistentSet::build(default_labels(3), Partition::discrete(3),
                                        {{2.0, blocks(3, {{0, 1}, {2}})}, {4.0, Partition::single_block(3)}});
    const auto verdict = is_persistence_preserving(SetMap::identity(p.labels()), p, q);
    ASSERT_FALSE(verdict);
    EXPECT_EQ(verdict.witness->interval_begin, 3.0);
    EXPECT_EQ(verdict.witness->interval_end, 4.0);
    EXPECT_EQ(verdict.witness->scale, 3.5);
    EXPECT_EQ(verdict.witness->first, 0U);
    EXPECT_EQ(verdict.witness->second, 2U);
}

TEST(Preservation, AgreesWithSampledRefinementAndComposes) {
    auto rng = make_rng(14);
    for (int t = 0; t < 200; ++t) {
        const auto m = random_contraction(rng, 6, false);
        for (const auto rule : {LinkageRule::single, LinkageRule::complete, LinkageRule::average}) {
            const auto p = agglomerate(m.source, rule);
            const auto q = agglomerate(m.target, rule);
            EXPECT_EQ(static_cast<bool>(is_persistence_preserving(m.map, p, q)),
                      oracle::preserving_by_sampling(m.map, p, q));
        }
        // g: target -> quotient of the target; g carries rgen to rgen, as does f.
        const auto g = quotient_at_scale(m.target, std::uniform_real_distribution<double>(0.0, 4.0)(rng));
        const auto px = rgen(m.source);
        const auto py = rgen(m.target);
        const auto pz = rgen(g.space);
        ASSERT_TRUE(is_persistence_preserving(m.map, px, py));
        ASSERT_TRUE(is_persistence_preserving(g.projection, py, pz));
        EXPECT_TRUE(is_persistence_preserving(compose(g.projection, m.map), px, pz));
    }
}

TEST(ScalePersistent, Examples) {
    const auto p = PersistentSet::build(default_labels(2), Partition::discrete(2), {{2.0, Partition::single_block(2)}});
    EXPECT_TRUE(equivalent(scale_persistent(p, 1.0), p));
    EXPECT_EQ(scale_persistent(p, 3.0).breakpoints(), (std::vector<double>{6.0}));
    EXPECT_EQ(error_code([&] { scale_persistent(p, -2.0); }), "NonpositiveScale");
}

TEST(Pseudometric, Examples) {
    const auto z = validate_metric({{0, 0.7}, {0.7, 0}}, false);
    EXPECT_EQ(persistent_to_pseudometric(rgen(z))(0, 1), 0.7);
    const auto constant = PersistentSet::constant(default_labels(3), Partition::single_block(3));
    const auto d = persistent_to_pseudometric(constant);
    EXPECT_TRUE(d.pseudo());
    EXPECT_EQ(d(0, 2), 0.0);
    EXPECT_EQ(error_code([] { persistent_to_pseudometric(PersistentSet::constant(default_labels(2), Partition::discrete(2))); }),
              "NotADendrogram");
}

TEST(Pseudometric, ComponentSpaceMergeHeights) {
    const double w13 = 4, w23 = 6, w12 = 11;
    SquareMatrix w(3);
    w.set_symmetric(0, 2, w13);
    w.set_symmetric(1, 2, w23);
    w.set_symmetric(0, 1, w12);
    const auto d = persistent_to_pseudometric(rgen(path_metric(w)));
    EXPECT_EQ(d(0, 2), w13);
    EXPECT_EQ(d(1, 2), w23);
    EXPECT_EQ(d(0, 1), std::max(w13, w23));
}

TEST(IntervalReport, Examples) {
    const auto z = rgen(validate_metric({{0, 2.5}, {2.5, 0}}, false));
    const auto report = interval_report(z);
    ASSERT_EQ(report.size(), 2U);
    EXPECT_EQ(report[0].begin, 0.0);
    EXPECT_EQ(report[0].end, 2.5);
    EXPECT_TRUE(report[0].partition.is_discrete());
    EXPECT_EQ(report[1].begin, 2.5);
    EXPECT_TRUE(std::isinf(report[1].length));
    EXPECT_TRUE(report[1].partition.is_single_block());

    const auto constant = interval_report(PersistentSet::constant(default_labels(2), Partition::discrete(2)));
    ASSERT_EQ(constant.size(), 1U);
    EXPECT_TRUE(std::isinf(constant[0].length));
}

TEST(IntervalReport, TwoScaleDataHasTwoLongIntervals) {
    // Four tight pairs (spacing 0.1) in two groups (pair gap 1) far apart (gap 10).
    PointCloud cloud(1);
    for (const double x : {0.0, 0.1, 1.1, 1.2, 11.2, 11.3, 12.3, 12.4}) {
        const double p[1] = {x};
        cloud.add(p);
    }
    const auto report = interval_report(rgen(cloud.to_metric_space()));
    std::size_t long_finite = 0;
    for (const auto& entry : report) {
        if (std::isfinite(entry.length) && entry.length >= 0.5) {
            ++long_finite;
        }
    }
    EXPECT_GE(long_finite, 2U);
}

TEST(PersistentInvariants, MonotoneAndConstantOnIntervals) {
    auto rng = make_rng(2);
    for (int t = 0; t < 100; ++t) {
        const auto x = random_metric_space(rng, 1 + t % 9);
        for (const auto rule : {LinkageRule::single, LinkageRule::complete, LinkageRule::average}) {
            const auto p = agglomerate(x, rule);
            for (std::size_t i = 0; i + 1 < p.partitions().size(); ++i) {
                EXPECT_TRUE(refines(p.partitions()[i], p.partitions()[i + 1]));
                EXPECT_FALSE(p.partitions()[i] == p.partitions()[i + 1]);
            }
            for (const auto& entry : interval_report(p)) {
                const double inside = std::isfinite(entry.end) ? (entry.begin + entry.end) / 2 : entry.begin + 1;
                EXPECT_EQ(theta_at(p, entry.begin), theta_at(p, inside));
            }
        }
    }
}
