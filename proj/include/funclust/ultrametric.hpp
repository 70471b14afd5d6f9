#pragma once

#include "funclust/error.hpp"
#include "funclust/linkage.hpp"
#include "funclust/metric.hpp"
#include "funclust/persistence.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace funclust {

struct UltrametricVerdict {
    bool ultrametric = true;
    /// (x, y, z) with d(x, z) > max(d(x, y), d(y, z)).
    std::optional<std::array<std::size_t, 3>> violation;

    explicit operator bool() const { return ultrametric; }
};

/// Strong triangle inequality within kRelativeTolerance, O(n^3).
inline UltrametricVerdict check_ultrametric(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t z = x + 1; z < n; ++z) {
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x || y == z) {
                    continue;
                }
                if (exceeds(space(x, z), std::max(space(x, y), space(y, z)))) {
                    return {false, std::array<std::size_t, 3>{x, y, z}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

/// A metric space known to satisfy the strong triangle inequality.
class Ultrametric {
  public:
    /// Throws NotUltrametric with the offending triple.
    static Ultrametric from_space(FiniteMetricSpace space) {
        const auto verdict = check_ultrametric(space);
        if (!verdict) {
            const auto& t = *verdict.violation;
            throw Error("NotUltrametric", "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
                                              std::to_string(t[2]) + ")");
        }
        return Ultrametric(std::move(space));
    }

    const FiniteMetricSpace& space() const { return space_; }
    std::size_t size() const { return space_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return space_(i, j); }

  private:
    friend Ultrametric epsilon_metric(const FiniteMetricSpace&);

    explicit Ultrametric(FiniteMetricSpace space)
      : space_{std::move(space)} {}

    FiniteMetricSpace space_;
};

/// epsilon(x, x') = least r with x ~_r x', i.e. the minimax path cost. Computed
/// as the largest edge on the minimum-spanning-tree path (dense Prim, then a
/// traversal of the tree from every root), O(n^2).
inline Ultrametric epsilon_metric(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    if (n == 0) {
        throw Error("EmptySpace", "epsilon metric of an empty space");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::pair<std::size_t, double>>> tree(n);
    std::vector<double> best(n, inf);
    std::vector<std::size_t> parent(n, n);
    std::vector<bool> done(n, false);
    best[0] = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!done[v] && (u == n || best[v] < best[u])) {
                u = v;
            }
        }
        done[u] = true;
        if (parent[u] != n) {
            tree[u].emplace_back(parent[u], best[u]);
            tree[parent[u]].emplace_back(u, best[u]);
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (!done[v] && space(u, v) < best[v]) {
                best[v] = space(u, v);
                parent[v] = u;
            }
        }
    }

    SquareMatrix eps(n);
    std::vector<std::size_t> stack;
    std::vector<bool> seen(n);
    for (std::size_t root = 0; root < n; ++root) {
        std::fill(seen.begin(), seen.end(), false);
        seen[root] = true;
        stack.assign(1, root);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : tree[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    eps(root, v) = std::max(eps(root, u), w);
                    stack.push_back(v);
                }
            }
        }
    }
    return Ultrametric(FiniteMetricSpace::unchecked(space.labels(), std::move(eps), space.pseudo()));
}

struct RoundtripVerdict {
    bool equal = true;
    double max_deviation = 0.0;

    explicit operator bool() const { return equal; }
};

/// Compares the metric read off the single-linkage dendrogram with the
/// minimax-path metric, entrywise within kRelativeTolerance.
inline RoundtripVerdict dendrogram_ultrametric_roundtrip(const FiniteMetricSpace& space) {
    const auto from_tree = persistent_to_pseudometric(rgen(space));
    const auto eps = epsilon_metric(space);
    RoundtripVerdict verdict;
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            verdict.max_deviation = std::max(verdict.max_deviation, std::abs(from_tree(i, j) - eps(i, j)));
            verdict.equal = verdict.equal && approx_equal(from_tree(i, j), eps(i, j));
        }
    }
    return verdict;
}

}  // namespace funclust
