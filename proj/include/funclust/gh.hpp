#pragma once

// Correspondences, distortion and the Gromov-Hausdorff distance in the
// factor-free convention
//
//     dGH(X, Y) = min over correspondences R of max |d_X(x,x') - d_Y(y,y')|,
//
// which is twice the textbook value. Also ambient Hausdorff distance,
// covering radius and set distance for finite samples of a larger space.

#include "funclust/error.hpp"
#include "funclust/metric.hpp"
#include "funclust/ultrametric.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace funclust {

/// Anything with size() and a symmetric distance operator()(i, j).
template <typename M>
concept MetricLike = requires(const M& m, std::size_t i) {
    { m.size() } -> std::convertible_to<std::size_t>;
    { m(i, i) } -> std::convertible_to<double>;
};

/// Relation between the points of two spaces, as (x, y) index pairs.
using Correspondence = std::vector<std::pair<std::size_t, std::size_t>>;

/// Throws NotACorrespondence naming the first uncovered point.
inline void validate_correspondence(const Correspondence& relation, std::size_t x_size, std::size_t y_size) {
    std::vector<bool> x_hit(x_size, false);
    std::vector<bool> y_hit(y_size, false);
    for (const auto& [x, y] : relation) {
        if (x >= x_size || y >= y_size) {
            throw Error("NotACorrespondence", "pair (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
        }
        x_hit[x] = true;
        y_hit[y] = true;
    }
    for (std::size_t x = 0; x < x_size; ++x) {
        if (!x_hit[x]) {
            throw Error("NotACorrespondence", "first-space point " + std::to_string(x) + " uncovered");
        }
    }
    for (std::size_t y = 0; y < y_size; ++y) {
        if (!y_hit[y]) {
            throw Error("NotACorrespondence", "second-space point " + std::to_string(y) + " uncovered");
        }
    }
}

template <MetricLike MX, MetricLike MY>
double distortion(const Correspondence& relation, const MX& x, const MY& y) {
    validate_correspondence(relation, x.size(), y.size());
    double worst = 0.0;
    for (std::size_t a = 0; a < relation.size(); ++a) {
        for (std::size_t b = a + 1; b < relation.size(); ++b) {
            const auto [x1, y1] = relation[a];
            const auto [x2, y2] = relation[b];
            worst = std::max(worst, std::abs(x(x1, x2) - y(y1, y2)));
        }
    }
    return worst;
}

inline constexpr std::size_t kDefaultExhaustiveLimit = 10;

struct GhResult {
    double value = 0.0;
    Correspondence witness;
};

namespace detail {

/// Hausdorff distance between two finite sets of reals.
inline double real_set_hausdorff(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto one_side = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (const double v : from) {
            const auto it = std::lower_bound(to.begin(), to.end(), v);
            double nearest = std::numeric_limits<double>::infinity();
            if (it != to.end()) {
                nearest = std::min(nearest, *it - v);
            }
            if (it != to.begin()) {
                nearest = std::min(nearest, v - *std::prev(it));
            }
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::max(one_side(a, b), one_side(b, a));
}

template <MetricLike M>
std::vector<double> row_of(const M& m, std::size_t i) {
    std::vector<double> row(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) {
        row[j] = m(i, j);
    }
    return row;
}

template <MetricLike M>
double diameter_of(const M& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            best = std::max(best, m(i, j));
        }
    }
    return best;
}

}  // namespace detail

/// Cheap lower bound on dGH: the larger of the diameter gap and the
/// distance-distribution bound. For (x, y) in an optimal correspondence,
/// every distance out of x is matched within dGH by a distance out of y, so
/// dGH >= max_x min_y H(row_x, row_y) and symmetrically, H being the
/// Hausdorff distance between sets of reals.
template <MetricLike MX, MetricLike MY>
double gh_lower_bound(const MX& x, const MY& y) {
    if (x.size() == 0 || y.size() == 0) {
        throw Error("EmptySpace", "Gromov-Hausdorff distance needs nonempty spaces");
    }
    double bound = std::abs(detail::diameter_of(x) - detail::diameter_of(y));
    std::vector<std::vector<double>> x_rows;
    std::vector<std::vector<double>> y_rows;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x_rows.push_back(detail::row_of(x, i));
    }
    for (std::size_t j = 0; j < y.size(); ++j) {
        y_rows.push_back(detail::row_of(y, j));
    }
    std::vector<double> h(x.size() * y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            h[i * y.size() + j] = detail::real_set_hausdorff(x_rows[i], y_rows[j]);
        }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < y.size(); ++j) {
            best = std::min(best, h[i * y.size() + j]);
        }
        bound = std::max(bound, best);
    }
    for (std::size_t j = 0; j < y.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) {
            best = std::min(best, h[i * y.size() + j]);
        }
        bound = std::max(bound, best);
    }
    return bound;
}

/// Exact dGH by branch and bound. Distortion only grows with the relation,
/// so it suffices to search relations made of a map phi: X -> Y plus one
/// partner for every point of Y missed by phi. Throws TooLarge when
/// |X| + |Y| exceeds `limit`.
template <MetricLike MX, MetricLike MY>
GhResult gh_exact(const MX& x, const MY& y, std::size_t limit = kDefaultExhaustiveLimit) {
    const std::size_t nx = x.size();
    const std::size_t ny = y.size();
    if (nx == 0 || ny == 0) {
        throw Error("EmptySpace", "Gromov-Hausdorff distance needs nonempty spaces");
    }
    if (nx + ny > limit) {
        throw Error("TooLarge", std::to_string(nx) + "+" + std::to_string(ny) + " points exceed the exhaustive limit " +
                                    std::to_string(limit) + "; use gh_lower_bound");
    }
    const double floor = gh_lower_bound(x, y);

    GhResult best{std::numeric_limits<double>::infinity(), {}};
    Correspondence current;
    std::vector<std::size_t> y_cover(ny, 0);
    bool done = false;

    // Cost of appending (a, b) to `current` given the running maximum.
    const auto extended = [&](std::size_t a, std::size_t b, double running) {
        for (const auto& [pa, pb] : current) {
            running = std::max(running, std::abs(x(a, pa) - y(b, pb)));
            if (running >= best.value) {
                break;
            }
        }
        return running;
    };

    std::vector<std::size_t> missed;
    const auto assign_missed = [&](auto&& self, std::size_t k, double running) -> void {
        if (done) {
            return;
        }
        if (k == missed.size()) {
            best = {running, current};
            done = best.value <= floor;
            return;
        }
        for (std::size_t a = 0; a < nx && !done; ++a) {
            const double next = extended(a, missed[k], running);
            if (next < best.value) {
                current.emplace_back(a, missed[k]);
                self(self, k + 1, next);
                current.pop_back();
            }
        }
    };
    const auto assign_map = [&](auto&& self, std::size_t a, double running) -> void {
        if (done) {
            return;
        }
        if (a == nx) {
            missed.clear();
            for (std::size_t b = 0; b < ny; ++b) {
                if (y_cover[b] == 0) {
                    missed.push_back(b);
                }
            }
            assign_missed(assign_missed, 0, running);
            return;
        }
        for (std::size_t b = 0; b < ny && !done; ++b) {
            const double next = extended(a, b, running);
            if (next < best.value) {
                current.emplace_back(a, b);
                ++y_cover[b];
                self(self, a + 1, next);
                --y_cover[b];
                current.pop_back();
            }
        }
    };
    assign_map(assign_map, 0, 0.0);
    return best;
}

template <MetricLike Z>
void require_subset(const Z& ambient, std::span<const std::size_t> subset, const char* what) {
    if (subset.empty()) {
        throw Error("EmptySubset", std::string(what) + " is empty");
    }
    for (const std::size_t i : subset) {
        if (i >= ambient.size()) {
            throw Error("BadShape", std::string(what) + " index " + std::to_string(i) + " outside the ambient space");
        }
    }
}

/// Largest distance from a point of one subset to the other subset, both ways.
template <MetricLike Z>
double hausdorff(const Z& ambient, std::span<const std::size_t> a, std::span<const std::size_t> b) {
    require_subset(ambient, a, "first subset");
    require_subset(ambient, b, "second subset");
    const auto one_side = [&](std::span<const std::size_t> from, std::span<const std::size_t> to) {
        double worst = 0.0;
        for (const std::size_t p : from) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const std::size_t q : to) {
                nearest = std::min(nearest, ambient(p, q));
                if (nearest <= worst) {
                    break;
                }
            }
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::max(one_side(a, b), one_side(b, a));
}

/// Hausdorff distance between `sample` and the whole ambient space.
template <MetricLike Z>
double covering_radius(const Z& ambient, std::span<const std::size_t> sample) {
    std::vector<std::size_t> all(ambient.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    return hausdorff(ambient, sample, all);
}

/// min over z1 in a, z2 in b of d(z1, z2).
template <MetricLike Z>
double set_distance(const Z& ambient, std::span<const std::size_t> a, std::span<const std::size_t> b) {
    require_subset(ambient, a, "first subset");
    require_subset(ambient, b, "second subset");
    double best = std::numeric_limits<double>::infinity();
    for (const std::size_t p : a) {
        for (const std::size_t q : b) {
            best = std::min(best, ambient(p, q));
        }
    }
    return best;
}

/// Dense finite proxy of an ambient space with samples drawn from it.
/// `component` is empty or labels every ambient point with its component.
struct AmbientSample {
    PointCloud ambient;
    std::vector<std::size_t> sample;
    std::vector<std::size_t> second_sample;
    std::vector<std::size_t> component;
    std::size_t component_count = 0;

    /// Ambient indices of component c.
    std::vector<std::size_t> members(std::size_t c) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < component.size(); ++i) {
            if (component[i] == c) {
                out.push_back(i);
            }
        }
        return out;
    }
};

struct InequalityCheck {
    double lhs = 0.0;  ///< dGH of the minimax-path (epsilon) metrics
    double rhs = 0.0;  ///< dGH of the original metrics
    bool holds = true;

    explicit operator bool() const { return holds; }
};

/// Single linkage does not increase dGH: dGH(d_X, d_Y) >= dGH(eps_X, eps_Y).
inline InequalityCheck check_epsilon_contraction(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                                 std::size_t limit = kDefaultExhaustiveLimit) {
    InequalityCheck check;
    check.rhs = gh_exact(x, y, limit).value;
    check.lhs = gh_exact(epsilon_metric(x).space(), epsilon_metric(y).space(), limit).value;
    check.holds = !exceeds(check.lhs, check.rhs);
    return check;
}

}  // namespace funclust
