#pragma once

// Clustering schemes as maps from metric spaces to persistent sets, checks of
// the three conditions that characterise single linkage, a randomised search
// for maps that a scheme fails to carry to persistence-preserving maps, and
// the graph of clusters over a cover of a lens function.

#include "funclust/error.hpp"
#include "funclust/linkage.hpp"
#include "funclust/metric.hpp"
#include "funclust/persistence.hpp"
#include "funclust/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace funclust {

struct ClusteringScheme {
    std::string name;
    std::function<PersistentSet(const FiniteMetricSpace&)> run;
};

/// Single linkage with clusters below `min_size` points broken into
/// singletons at every scale. Scales are those of rgen; classes are read
/// per scale, so a point may leave the singleton regime as its class grows.
inline PersistentSet cardinality_filtered(const FiniteMetricSpace& space, std::size_t min_size) {
    if (min_size == 0) {
        throw Error("InvalidCardinality", "minimum cluster size must be at least 1");
    }
    const PersistentSet base = rgen(space);
    const auto filter = [&](const Partition& p) {
        std::vector<std::size_t> id(p.ground_size());
        std::size_t next_singleton = p.block_count();
        for (std::size_t x = 0; x < id.size(); ++x) {
            const std::size_t b = p.block_of(x);
            id[x] = p.blocks()[b].size() >= min_size ? b : next_singleton++;
        }
        return Partition::from_assignment(id);
    };
    std::vector<PersistentSet::Step> steps;
    for (std::size_t i = 0; i < base.breakpoints().size(); ++i) {
        steps.push_back({base.breakpoints()[i], filter(base.partitions()[i + 1])});
    }
    return PersistentSet::build(space.labels(), filter(base.partitions().front()), std::move(steps));
}

/// Registered names: "single" (alias "rgen"), "complete", "average", and
/// "cardinality:<m>" for cardinality_filtered with minimum size m.
inline ClusteringScheme scheme_by_name(std::string_view name) {
    if (name == "single" || name == "rgen") {
        return {std::string(name), [](const FiniteMetricSpace& x) { return rgen(x); }};
    }
    if (name == "complete" || name == "average") {
        const LinkageRule rule = parse_linkage(name);
        return {std::string(name), [rule](const FiniteMetricSpace& x) { return agglomerate(x, rule); }};
    }
    constexpr std::string_view prefix = "cardinality:";
    if (name.starts_with(prefix)) {
        const std::string digits(name.substr(prefix.size()));
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            const std::size_t m = std::stoul(digits);
            if (m >= 1) {
                return {std::string(name), [m](const FiniteMetricSpace& x) { return cardinality_filtered(x, m); }};
            }
        }
    }
    throw Error("UnknownScheme", std::string(name));
}

inline std::vector<std::string> registered_schemes() { return {"single", "complete", "average", "cardinality:<m>"}; }

struct ConditionOptions {
    std::size_t trials = 200;           ///< random spaces for conditions I and III
    std::size_t two_point_trials = 50;  ///< random two-point spaces for condition II
    std::size_t max_n = 10;
    std::uint64_t seed = 0;
};

struct ConditionResult {
    std::string condition;  ///< "I", "II" or "III"
    bool passed = true;
    std::size_t checked = 0;
    std::string witness;  ///< empty when passed
};

struct ConditionReport {
    std::string scheme;
    std::vector<ConditionResult> results;

    bool all_passed() const {
        return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    }
};

namespace detail {

inline std::string describe_space(const FiniteMetricSpace& x) {
    std::string s = "n=" + std::to_string(x.size()) + " d=[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            s += (s.back() == '[' ? "" : ",") + std::to_string(x(i, j));
        }
    }
    return s + "]";
}

}  // namespace detail

/// I: output ground set equals input ground set. II: on Z(delta) the output
/// is discrete below delta and one block from delta on. III: the output is
/// discrete at sampled scales below the separation.
inline ConditionReport check_conditions(const ClusteringScheme& scheme, const ConditionOptions& options = {}) {
    ConditionReport report;
    report.scheme = scheme.name;
    for (const char* name : {"I", "II", "III"}) {
        report.results.push_back(ConditionResult{name, true, 0, {}});
    }
    auto& cond1 = report.results[0];
    auto& cond2 = report.results[1];
    auto& cond3 = report.results[2];
    const std::size_t max_n = std::max<std::size_t>(options.max_n, 2);

    for (std::size_t t = 0; t < options.trials; ++t) {
        Rng rng = make_rng(options.seed, t);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
        const auto space = random_metric_space(rng, n);
        const auto out = scheme.run(space);

        ++cond1.checked;
        if (cond1.passed && out.labels() != space.labels()) {
            cond1.passed = false;
            cond1.witness = detail::describe_space(space);
        }
        if (n < 2) {
            continue;
        }
        const double sep = separation(space);
        std::vector<double> scales{0.0, std::nextafter(sep, 0.0)};
        std::uniform_real_distribution<double> below(0.0, sep);
        for (int k = 0; k < 4; ++k) {
            scales.push_back(below(rng));
        }
        for (const double r : scales) {
            ++cond3.checked;
            if (cond3.passed && !theta_at(out, r).is_discrete()) {
                cond3.passed = false;
                cond3.witness = detail::describe_space(space) + " r=" + std::to_string(r);
            }
        }
    }

    for (std::size_t t = 0; t < options.two_point_trials; ++t) {
        Rng rng = make_rng(options.seed ^ 0x9e3779b97f4a7c15ULL, t);
        const double delta = std::uniform_real_distribution<double>(0.01, 10.0)(rng);
        const auto z = validate_metric({{0.0, delta}, {delta, 0.0}}, false, {"p", "q"});
        const auto expected = PersistentSet::build(z.labels(), Partition::discrete(2), {{delta, Partition::single_block(2)}});
        ++cond2.checked;
        if (cond2.passed && !equivalent(scheme.run(z), expected)) {
            cond2.passed = false;
            cond2.witness = "delta=" + std::to_string(delta);
        }
    }
    return report;
}

/// A distance non-increasing map whose image under a scheme is not
/// persistence preserving.
struct FunctorialityWitness {
    FiniteMetricSpace source;
    FiniteMetricSpace target;
    SetMap map;
    PreservationWitness failure;
    std::string origin;  ///< "fixture:<name>" or "trial:<index>"
};

struct SearchOptions {
    std::size_t max_n = 8;
    std::size_t trials = 500;
    std::uint64_t seed = 0;
    bool injective_only = false;  ///< restrict to monic maps
    bool include_fixtures = false;
    unsigned threads = 1;
};

/// X = {A,B,C} with AB=4, AC=3, BC=5 and Y = {A',B',C'} with A'B'=2,
/// A'C'=3, B'C'=4, f the letter-preserving bijection. Pairing of the edge
/// lengths {4,3,5} and {4,3,2} is the one under which f is distance
/// non-increasing and complete linkage at r = 3.5 yields {{A,C},{B}} on X and
/// {{A',B'},{C'}} on Y.
inline RandomMorphism complete_linkage_fixture() {
    auto x = validate_metric({{0, 4, 3}, {4, 0, 5}, {3, 5, 0}}, false, {"A", "B", "C"});
    auto y = validate_metric({{0, 2, 3}, {2, 0, 4}, {3, 4, 0}}, false, {"A'", "B'", "C'"});
    SetMap f = SetMap::from_pairs(x.labels(), y.labels(), {{"A", "A'"}, {"B", "B'"}, {"C", "C'"}});
    return {std::move(x), std::move(y), std::move(f)};
}

/// X = {A,B,C} equilateral with side 2 and Y = {A',B',C'} with A'B'=1,
/// A'C'=B'C'=2. Single linkage gives three scale ranges [0,1), [1,2),
/// [2,inf), with eta = {{A',B'},{C'}} on [1,2) and theta discrete there.
inline RandomMorphism three_range_fixture() {
    auto x = validate_metric({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}}, false, {"A", "B", "C"});
    auto y = validate_metric({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}, false, {"A'", "B'", "C'"});
    SetMap f = SetMap::from_pairs(x.labels(), y.labels(), {{"A", "A'"}, {"B", "B'"}, {"C", "C'"}});
    return {std::move(x), std::move(y), std::move(f)};
}

/// Returns the failing map with the smallest trial index (fixtures first),
/// independent of the number of worker threads.
inline std::optional<FunctorialityWitness> counterexample_search(const ClusteringScheme& scheme,
                                                                 const SearchOptions& options = {}) {
    const auto test = [&](const RandomMorphism& m) -> std::optional<PreservationWitness> {
        const auto verdict = is_persistence_preserving(m.map, scheme.run(m.source), scheme.run(m.target));
        return verdict.witness;
    };
    if (options.include_fixtures) {
        auto fixture = complete_linkage_fixture();
        if (auto failure = test(fixture)) {
            return FunctorialityWitness{std::move(fixture.source), std::move(fixture.target), std::move(fixture.map),
                                        *failure, "fixture:complete-linkage"};
        }
    }

    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> best_trial{none};
    const unsigned workers = std::max(1u, options.threads);
    std::vector<std::optional<FunctorialityWitness>> found(workers);
    const auto work = [&](unsigned w) {
        for (std::size_t t = w; t < options.trials; t += workers) {
            if (t > best_trial.load()) {
                return;
            }
            Rng rng = make_rng(options.seed, t);
            auto m = random_contraction(rng, options.max_n, options.injective_only);
            if (auto failure = test(m)) {
                found[w] = FunctorialityWitness{std::move(m.source), std::move(m.target), std::move(m.map), *failure,
                                                "trial:" + std::to_string(t)};
                std::size_t current = best_trial.load();
                while (t < current && !best_trial.compare_exchange_weak(current, t)) {
                }
                return;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    if (best_trial.load() == none) {
        return std::nullopt;
    }
    return std::move(found[best_trial.load() % workers]);
}

struct CoverInterval {
    double lo;
    double hi;
};

/// `count` equal intervals covering [lo, hi], consecutive ones sharing the
/// fraction `overlap` of their length.
inline std::vector<CoverInterval> uniform_cover(double lo, double hi, std::size_t count, double overlap) {
    if (count == 0 || !(overlap >= 0.0 && overlap < 1.0) || !(hi >= lo)) {
        throw Error("BadShape", "cover needs count >= 1, overlap in [0,1) and lo <= hi");
    }
    const double width = (hi - lo) / (static_cast<double>(count) - static_cast<double>(count - 1) * overlap);
    const double step = width * (1.0 - overlap);
    std::vector<CoverInterval> cover;
    for (std::size_t i = 0; i < count; ++i) {
        const double start = lo + static_cast<double>(i) * step;
        cover.push_back({start, i + 1 == count ? hi : start + width});
    }
    return cover;
}

/// A cluster of one cover element (first == second) or of the overlap of
/// two cover elements (first < second).
struct CoverNode {
    std::size_t first;
    std::size_t second;
    std::vector<std::size_t> points;

    bool is_overlap() const { return first != second; }
};

struct CoverGraph {
    std::vector<CoverNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::size_t component_count() const {
        DisjointSets sets(nodes.size());
        std::size_t count = nodes.size();
        for (const auto& [a, b] : edges) {
            if (sets.unite(a, b)) {
                --count;
            }
        }
        return count;
    }
};

/// One-skeleton of the diagram of clusters over a cover of the lens range:
/// a vertex for every threshold-`eps` single-linkage cluster of each cover
/// element and of each nonempty pairwise overlap, and an edge from each
/// overlap cluster to the cluster containing it in either cover element.
inline CoverGraph cover_cluster_graph(const FiniteMetricSpace& space, std::span<const double> lens,
                                      std::span<const CoverInterval> cover, double eps) {
    if (lens.size() != space.size()) {
        throw Error("BadShape", "lens has " + std::to_string(lens.size()) + " values for " + std::to_string(space.size()) +
                                    " points");
    }
    if (!(eps > 0.0)) {
        throw Error("NonpositiveScale", "cluster threshold must be positive");
    }
    const auto inside = [&](std::size_t point, std::size_t element) {
        return lens[point] >= cover[element].lo && lens[point] <= cover[element].hi;
    };
    for (std::size_t x = 0; x < space.size(); ++x) {
        bool covered = false;
        for (std::size_t c = 0; c < cover.size() && !covered; ++c) {
            covered = inside(x, c);
        }
        if (!covered) {
            throw Error("UncoveredPoint", "point " + space.label(x) + " has lens value " + std::to_string(lens[x]) +
                                              " outside every interval");
        }
    }

    CoverGraph graph;
    std::vector<std::vector<std::size_t>> element_nodes(cover.size());
    for (std::size_t c = 0; c < cover.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t x = 0; x < space.size(); ++x) {
            if (inside(x, c)) {
                members.push_back(x);
            }
        }
        for (auto& block : threshold_blocks(space, members, eps)) {
            element_nodes[c].push_back(graph.nodes.size());
            graph.nodes.push_back({c, c, std::move(block)});
        }
    }
    const auto containing = [&](std::size_t element, std::size_t point) {
        for (const std::size_t node : element_nodes[element]) {
            const auto& pts = graph.nodes[node].points;
            if (std::binary_search(pts.begin(), pts.end(), point)) {
                return node;
            }
        }
        throw Error("InternalError", "point missing from its cover element");
    };
    for (std::size_t a = 0; a < cover.size(); ++a) {
        for (std::size_t b = a + 1; b < cover.size(); ++b) {
            std::vector<std::size_t> members;
            for (std::size_t x = 0; x < space.size(); ++x) {
                if (inside(x, a) && inside(x, b)) {
                    members.push_back(x);
                }
            }
            for (auto& block : threshold_blocks(space, members, eps)) {
                const std::size_t node = graph.nodes.size();
                const std::size_t anchor = block.front();
                graph.nodes.push_back({a, b, std::move(block)});
                graph.edges.emplace_back(node, containing(a, anchor));
                graph.edges.emplace_back(node, containing(b, anchor));
            }
        }
    }
    return graph;
}

}  // namespace funclust
