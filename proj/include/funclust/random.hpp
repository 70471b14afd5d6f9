#pragma once

// Seeded generators for random finite metric spaces and random distance
// non-increasing maps.

#include "funclust/metric.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace funclust {

using Rng = std::mt19937_64;

/// Independent stream per (seed, index) so trials can run in any order.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

inline std::vector<std::string> prefixed_labels(const std::string& prefix, std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(prefix + std::to_string(i));
    }
    return labels;
}

/// Alternates between Euclidean point clouds in the plane and path metrics
/// of random edge weights, so both "geometric" and generic metrics appear.
inline FiniteMetricSpace random_metric_space(Rng& rng, std::size_t n, const std::string& prefix = "x") {
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::uniform_real_distribution<double> weight(1.0, 10.0);
    if (std::bernoulli_distribution(0.5)(rng)) {
        PointCloud cloud(2);
        for (std::size_t i = 0; i < n; ++i) {
            const double p[2] = {coord(rng), coord(rng)};
            cloud.add(p);
        }
        auto space = cloud.to_metric_space({}, prefixed_labels(prefix, n));
        return FiniteMetricSpace::unchecked(space.labels(), space.matrix(), false);
    }
    SquareMatrix w(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            w.set_symmetric(i, j, weight(rng));
        }
    }
    auto space = path_metric(w, prefixed_labels(prefix, n));
    return FiniteMetricSpace::unchecked(space.labels(), space.matrix(), false);
}

/// A distance non-increasing map together with its source and target.
struct RandomMorphism {
    FiniteMetricSpace source;
    FiniteMetricSpace target;
    SetMap map;
};

/// Draws X, a set map g: X -> Y and a metric on Y that makes g distance
/// non-increasing: pairs of images get at most the smallest distance among
/// their preimage pairs (sometimes shrunk further), other pairs get random
/// weights, and the shortest-path closure turns the weights into a metric.
/// Candidates are rejected unless classify_morphism confirms the contraction.
inline RandomMorphism random_contraction(Rng& rng, std::size_t max_n, bool injective) {
    max_n = std::max<std::size_t>(max_n, 2);
    std::uniform_int_distribution<std::size_t> source_size(2, max_n);
    std::uniform_real_distribution<double> shrink(0.3, 1.0);
    std::uniform_real_distribution<double> weight(0.5, 10.0);
    std::bernoulli_distribution keep(0.5);
    for (;;) {
        const std::size_t n = source_size(rng);
        FiniteMetricSpace source = random_metric_space(rng, n, "x");
        const std::size_t m = injective ? std::uniform_int_distribution<std::size_t>(n, std::max(n, max_n))(rng)
                                        : std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
        std::vector<std::size_t> image(n);
        if (injective) {
            std::vector<std::size_t> targets(m);
            std::iota(targets.begin(), targets.end(), std::size_t{0});
            std::shuffle(targets.begin(), targets.end(), rng);
            std::copy_n(targets.begin(), n, image.begin());
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, m - 1);
            for (auto& y : image) {
                y = pick(rng);
            }
        }
        constexpr double unset = -1.0;
        SquareMatrix w(m, unset);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::size_t a = image[i];
                const std::size_t b = image[j];
                if (a != b && (w(a, b) == unset || source(i, j) < w(a, b))) {
                    w.set_symmetric(a, b, source(i, j));
                }
            }
        }
        for (std::size_t a = 0; a < m; ++a) {
            w(a, a) = 0.0;
            for (std::size_t b = a + 1; b < m; ++b) {
                if (w(a, b) == unset) {
                    w.set_symmetric(a, b, weight(rng));
                } else if (!keep(rng)) {
                    w.set_symmetric(a, b, w(a, b) * shrink(rng));
                }
            }
        }
        auto target = path_metric(w, prefixed_labels("y", m));
        target = FiniteMetricSpace::unchecked(target.labels(), target.matrix(), false);
        SetMap map(source.labels(), target.labels(), std::move(image));
        if (classify_morphism(map, source, target) >= MorphismClass::general) {
            return {std::move(source), std::move(target), std::move(map)};
        }
    }
}

}  // namespace funclust
