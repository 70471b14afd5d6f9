#pragma once

// Single-linkage dendrograms and the multi-merge agglomerative recursion.

#include "funclust/error.hpp"
#include "funclust/metric.hpp"
#include "funclust/persistence.hpp"
#include "funclust/union_find.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace funclust {

enum class LinkageRule { single, complete, average };

inline std::string_view to_string(LinkageRule rule) {
    switch (rule) {
        case LinkageRule::single: return "single";
        case LinkageRule::complete: return "complete";
        case LinkageRule::average: return "average";
    }
    return "single";
}

inline LinkageRule parse_linkage(std::string_view name) {
    if (name == "single") return LinkageRule::single;
    if (name == "complete") return LinkageRule::complete;
    if (name == "average") return LinkageRule::average;
    throw Error("UnknownLinkage", std::string(name));
}

/// Single-linkage persistent set: theta(r) is the partition into classes of
/// "joined by a chain with steps <= r". Kruskal over the sorted edge list;
/// one breakpoint per distinct edge length that merges something.
inline PersistentSet rgen(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    if (n == 0) {
        throw Error("EmptySpace", "cannot cluster an empty space");
    }
    std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            edges.emplace_back(space(i, j), i, j);
        }
    }
    std::sort(edges.begin(), edges.end());

    DisjointSets sets(n);
    std::size_t components = n;
    std::vector<PersistentSet::Step> steps;
    for (std::size_t e = 0; e < edges.size() && components > 1;) {
        const double height = std::get<0>(edges[e]);
        bool merged = false;
        for (; e < edges.size() && std::get<0>(edges[e]) == height; ++e) {
            if (sets.unite(std::get<1>(edges[e]), std::get<2>(edges[e]))) {
                merged = true;
                --components;
            }
        }
        if (merged) {
            steps.push_back({height, Partition::from_assignment(sets.assignment())});
        }
    }
    return PersistentSet::build(space.labels(), Partition::discrete(n), std::move(steps));
}

namespace detail {

inline double linkage_value(const FiniteMetricSpace& space, const std::vector<std::size_t>& a,
                            const std::vector<std::size_t>& b, LinkageRule rule) {
    switch (rule) {
        case LinkageRule::single: {
            double best = std::numeric_limits<double>::infinity();
            for (const std::size_t x : a) {
                for (const std::size_t y : b) {
                    best = std::min(best, space(x, y));
                }
            }
            return best;
        }
        case LinkageRule::complete: {
            double best = 0.0;
            for (const std::size_t x : a) {
                for (const std::size_t y : b) {
                    best = std::max(best, space(x, y));
                }
            }
            return best;
        }
        case LinkageRule::average: {
            double sum = 0.0;
            for (const std::size_t x : a) {
                for (const std::size_t y : b) {
                    sum += space(x, y);
                }
            }
            return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
        }
    }
    return 0.0;
}

}  // namespace detail

/// Agglomerative clustering where every round merges all chains of blocks
/// whose linkage value is within kHeightTolerance of the round minimum.
/// Linkage values are recomputed from raw distances each round.
///
/// theta(r) is the partition produced by the last round whose minimum is
/// <= r, and the discrete partition below the first round's minimum.
inline PersistentSet agglomerate(const FiniteMetricSpace& space, LinkageRule rule) {
    const std::size_t n = space.size();
    if (n == 0) {
        throw Error("EmptySpace", "cannot cluster an empty space");
    }
    std::vector<std::vector<std::size_t>> blocks(n);
    for (std::size_t i = 0; i < n; ++i) {
        blocks[i] = {i};
    }
    std::vector<PersistentSet::Step> steps;
    while (blocks.size() > 1) {
        const std::size_t k = blocks.size();
        std::vector<double> value(k * k, 0.0);
        double round_min = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                const double v = detail::linkage_value(space, blocks[a], blocks[b], rule);
                value[a * k + b] = v;
                round_min = std::min(round_min, v);
            }
        }
        DisjointSets chains(k);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                if (value[a * k + b] <= round_min + kHeightTolerance) {
                    chains.unite(a, b);
                }
            }
        }
        const auto id = chains.assignment();
        std::size_t merged_count = 0;
        for (const std::size_t c : id) {
            merged_count = std::max(merged_count, c + 1);
        }
        std::vector<std::vector<std::size_t>> next(merged_count);
        for (std::size_t a = 0; a < k; ++a) {
            next[id[a]].insert(next[id[a]].end(), blocks[a].begin(), blocks[a].end());
        }
        std::vector<std::size_t> owner(n);
        for (std::size_t b = 0; b < next.size(); ++b) {
            std::sort(next[b].begin(), next[b].end());
            for (const std::size_t x : next[b]) {
                owner[x] = b;
            }
        }
        blocks = std::move(next);
        steps.push_back({round_min, Partition::from_assignment(owner)});
    }
    return PersistentSet::build(space.labels(), Partition::discrete(n), std::move(steps));
}

/// Blocks of the single-linkage partition at a fixed threshold, restricted
/// to `subset`; entries are indices into `space`, blocks ordered by least index.
inline std::vector<std::vector<std::size_t>> threshold_blocks(const FiniteMetricSpace& space,
                                                              std::span<const std::size_t> subset, double threshold) {
    std::vector<std::size_t> points(subset.begin(), subset.end());
    std::sort(points.begin(), points.end());
    DisjointSets sets(points.size());
    for (std::size_t a = 0; a < points.size(); ++a) {
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            if (space(points[a], points[b]) <= threshold) {
                sets.unite(a, b);
            }
        }
    }
    const auto id = sets.assignment();
    std::size_t count = 0;
    for (const std::size_t c : id) {
        count = std::max(count, c + 1);
    }
    std::vector<std::vector<std::size_t>> blocks(count);
    for (std::size_t a = 0; a < points.size(); ++a) {
        blocks[id[a]].push_back(points[a]);
    }
    return blocks;
}

}  // namespace funclust
