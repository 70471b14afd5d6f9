#pragma once

// Sampling experiments on plane shapes: covering radius of finite samples,
// stability of the minimax-path metric under resampling, and convergence to
// the metric on connected components.
//
// The ambient compact space is proxied by a dense deterministic reference
// net; samples are appended to it so every ambient quantity (covering radius,
// set distance) is evaluated on one finite point set.

#include "funclust/error.hpp"
#include "funclust/gh.hpp"
#include "funclust/metric.hpp"
#include "funclust/random.hpp"
#include "funclust/ultrametric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace funclust {

struct Disk {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 1.0;
};

/// circle:<radius> | disk:<cx>,<cy>,<radius> | blobs:<gap> | disks3:<w13>,<w23>,<w12>
///
/// blobs is two unit disks `gap` apart; disks3 is three unit disks whose
/// pairwise gaps are w13, w23 and w12.
struct ShapeSpec {
    enum class Kind { circle, disks };

    Kind kind = Kind::circle;
    double circle_radius = 1.0;
    std::vector<Disk> disks;
    std::string text;

    std::size_t component_count() const { return kind == Kind::circle ? 1 : disks.size(); }
};

namespace detail {

inline std::vector<double> parse_numbers(std::string_view body, std::string_view whole) {
    std::vector<double> out;
    std::string item;
    std::stringstream stream{std::string(body)};
    while (std::getline(stream, item, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw Error("BadSpec", std::string(whole) + ": '" + item + "' is not a number");
        }
        if (used != item.size() || !std::isfinite(value)) {
            throw Error("BadSpec", std::string(whole) + ": '" + item + "' is not a number");
        }
        out.push_back(value);
    }
    return out;
}

}  // namespace detail

inline ShapeSpec parse_shape(std::string_view text) {
    ShapeSpec spec;
    spec.text = std::string(text);
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const auto args = colon == std::string_view::npos ? std::vector<double>{}
                                                      : detail::parse_numbers(text.substr(colon + 1), text);
    const auto expect = [&](std::size_t count) {
        if (args.size() != count) {
            throw Error("BadSpec", spec.text + ": expected " + std::to_string(count) + " parameters");
        }
    };
    const auto positive = [&](double v, const char* what) {
        if (!(v > 0.0)) {
            throw Error("BadSpec", spec.text + ": " + what + " must be positive");
        }
    };
    if (kind == "circle") {
        if (!args.empty()) {
            expect(1);
            spec.circle_radius = args[0];
        }
        positive(spec.circle_radius, "radius");
        return spec;
    }
    spec.kind = ShapeSpec::Kind::disks;
    if (kind == "disk") {
        expect(3);
        positive(args[2], "radius");
        spec.disks = {{args[0], args[1], args[2]}};
    } else if (kind == "blobs") {
        expect(1);
        positive(args[0], "gap");
        spec.disks = {{0.0, 0.0, 1.0}, {2.0 + args[0], 0.0, 1.0}};
    } else if (kind == "disks3") {
        expect(3);
        for (const double w : args) {
            positive(w, "gap");
        }
        // Centre distances of unit disks are gap + 2; place disk 1 at the
        // origin, disk 3 on the x-axis and disk 2 by the law of cosines.
        const double d13 = args[0] + 2.0;
        const double d23 = args[1] + 2.0;
        const double d12 = args[2] + 2.0;
        if (d12 > d13 + d23 || d13 > d12 + d23 || d23 > d12 + d13) {
            throw Error("BadSpec", spec.text + ": centre distances violate the triangle inequality");
        }
        const double x2 = (d12 * d12 + d13 * d13 - d23 * d23) / (2.0 * d13);
        const double y2 = std::sqrt(std::max(0.0, d12 * d12 - x2 * x2));
        spec.disks = {{0.0, 0.0, 1.0}, {x2, y2, 1.0}, {d13, 0.0, 1.0}};
    } else {
        throw Error("BadSpec", spec.text + ": unknown shape (circle, disk, blobs, disks3)");
    }
    for (std::size_t a = 0; a < spec.disks.size(); ++a) {
        for (std::size_t b = a + 1; b < spec.disks.size(); ++b) {
            const auto& p = spec.disks[a];
            const auto& q = spec.disks[b];
            if (std::hypot(p.cx - q.cx, p.cy - q.cy) <= p.radius + q.radius) {
                throw Error("BadSpec", spec.text + ": components overlap");
            }
        }
    }
    return spec;
}

enum class SamplingMode { quasi, iid };

struct SamplingOptions {
    /// Reference net size; 0 means 50 times the sample size.
    std::size_t net_size = 0;
    SamplingMode mode = SamplingMode::quasi;
};

namespace detail {

inline double fractional(double v) { return v - std::floor(v); }

inline constexpr double kInverseGolden = 0.61803398874989484820;
// Reciprocals of the plastic number and its square: the R2 sequence.
inline constexpr double kR2First = 0.75487766624669276005;
inline constexpr double kR2Second = 0.56984029099805326591;

/// Sample counts per component, proportional to the weights, largest
/// remainders first and ties to the lower index.
inline std::vector<std::size_t> allocate(std::size_t n, const std::vector<double>& weights) {
    double total = 0.0;
    for (const double w : weights) {
        total += w;
    }
    std::vector<std::size_t> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t used = 0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        const double exact = static_cast<double>(n) * weights[c] / total;
        counts[c] = static_cast<std::size_t>(std::floor(exact));
        used += counts[c];
        remainders.emplace_back(-(exact - std::floor(exact)), c);
    }
    std::stable_sort(remainders.begin(), remainders.end());
    for (std::size_t k = 0; used < n; ++k, ++used) {
        ++counts[remainders[k % remainders.size()].second];
    }
    return counts;
}

inline std::array<double, 2> disk_point(const Disk& disk, double u, double v) {
    const double r = disk.radius * std::sqrt(u);
    const double angle = 2.0 * std::numbers::pi * v;
    return {disk.cx + r * std::cos(angle), disk.cy + r * std::sin(angle)};
}

/// Sunflower net of the disk, a ring on its boundary and the points of the
/// boundary nearest every other disk, so gaps between disks are attained.
inline void add_disk_net(PointCloud& cloud, std::vector<std::size_t>& component, std::size_t c,
                         const std::vector<Disk>& disks, std::size_t count) {
    const Disk& disk = disks[c];
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
        const double r = disk.radius * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(count));
        const double angle = static_cast<double>(k) * golden_angle;
        const double p[2] = {disk.cx + r * std::cos(angle), disk.cy + r * std::sin(angle)};
        cloud.add(p);
        component.push_back(c);
    }
    const auto ring = static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(std::numbers::pi * static_cast<double>(count))));
    for (std::size_t k = 0; k < ring; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(ring);
        const double p[2] = {disk.cx + disk.radius * std::cos(angle), disk.cy + disk.radius * std::sin(angle)};
        cloud.add(p);
        component.push_back(c);
    }
    for (std::size_t other = 0; other < disks.size(); ++other) {
        if (other == c) {
            continue;
        }
        const double dx = disks[other].cx - disk.cx;
        const double dy = disks[other].cy - disk.cy;
        const double len = std::hypot(dx, dy);
        const double p[2] = {disk.cx + disk.radius * dx / len, disk.cy + disk.radius * dy / len};
        cloud.add(p);
        component.push_back(c);
    }
}

/// Appends n points of the shape. Quasi mode uses Kronecker sequences with a
/// random starting offset; iid mode draws uniformly.
inline std::vector<std::size_t> add_sample(const ShapeSpec& spec, PointCloud& cloud, std::vector<std::size_t>& component,
                                           std::size_t n, Rng rng, SamplingMode mode) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> indices;
    if (spec.kind == ShapeSpec::Kind::circle) {
        const double offset = unit(rng);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = mode == SamplingMode::quasi
                                 ? fractional(offset + static_cast<double>(k) * kInverseGolden)
                                 : unit(rng);
            const double angle = 2.0 * std::numbers::pi * t;
            const double p[2] = {spec.circle_radius * std::cos(angle), spec.circle_radius * std::sin(angle)};
            indices.push_back(cloud.add(p));
            component.push_back(0);
        }
        return indices;
    }
    std::vector<double> areas;
    for (const auto& disk : spec.disks) {
        areas.push_back(disk.radius * disk.radius);
    }
    const auto counts = allocate(n, areas);
    for (std::size_t c = 0; c < spec.disks.size(); ++c) {
        const double u0 = unit(rng);
        const double v0 = unit(rng);
        for (std::size_t k = 0; k < counts[c]; ++k) {
            const double step = static_cast<double>(k + 1);
            const double u = mode == SamplingMode::quasi ? fractional(u0 + step * kR2First) : unit(rng);
            const double v = mode == SamplingMode::quasi ? fractional(v0 + step * kR2Second) : unit(rng);
            const auto p = disk_point(spec.disks[c], u, v);
            indices.push_back(cloud.add(p));
            component.push_back(c);
        }
    }
    return indices;
}

}  // namespace detail

/// Reference net of the shape followed by two independent n-point samples
/// (streams 0 and 1 of `seed`), every ambient point labelled by component.
inline AmbientSample sample_shape(const ShapeSpec& spec, std::size_t n, std::uint64_t seed,
                                  const SamplingOptions& options = {}) {
    if (n == 0) {
        throw Error("BadSpec", "sample size must be at least 1");
    }
    const std::size_t net_size = options.net_size == 0 ? 50 * n : options.net_size;
    AmbientSample out;
    out.ambient = PointCloud(2);
    out.component_count = spec.component_count();
    if (spec.kind == ShapeSpec::Kind::circle) {
        for (std::size_t k = 0; k < net_size; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(net_size);
            const double p[2] = {spec.circle_radius * std::cos(angle), spec.circle_radius * std::sin(angle)};
            out.ambient.add(p);
            out.component.push_back(0);
        }
    } else {
        std::vector<double> areas;
        for (const auto& disk : spec.disks) {
            areas.push_back(disk.radius * disk.radius);
        }
        const auto counts = detail::allocate(net_size, areas);
        for (std::size_t c = 0; c < spec.disks.size(); ++c) {
            detail::add_disk_net(out.ambient, out.component, c, spec.disks, std::max<std::size_t>(counts[c], 1));
        }
    }
    out.sample = detail::add_sample(spec, out.ambient, out.component, n, make_rng(seed, 0), options.mode);
    out.second_sample = detail::add_sample(spec, out.ambient, out.component, n, make_rng(seed, 1), options.mode);
    return out;
}

/// Components as points, d_A = path metric of the pairwise set distances.
/// Labels are a1, a2, ...
inline FiniteMetricSpace component_space(const AmbientSample& sample) {
    if (sample.component_count == 0 || sample.component.size() != sample.ambient.size()) {
        throw Error("MissingLabels", "ambient points lack component labels");
    }
    const std::size_t k = sample.component_count;
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < sample.component.size(); ++i) {
        members.at(sample.component[i]).push_back(i);
    }
    SquareMatrix weights(k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const double gap = set_distance(sample.ambient, members[a], members[b]);
            if (!(gap > 0.0)) {
                throw Error("OverlappingComponents",
                            "components a" + std::to_string(a + 1) + " and a" + std::to_string(b + 1) + " touch");
            }
            weights.set_symmetric(a, b, gap);
        }
    }
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < k; ++a) {
        labels.push_back("a" + std::to_string(a + 1));
    }
    return path_metric(weights, std::move(labels));
}

/// Smallest set distance between two distinct components (infinite for one).
inline double component_separation(const AmbientSample& sample) {
    const auto a = component_space(sample);
    return a.size() < 2 ? std::numeric_limits<double>::infinity() : separation(a);
}

/// Largest nearest-neighbour distance inside the reference net restricted to
/// the first `net_points` ambient points; reported as the proxy's resolution.
inline double net_spacing(const PointCloud& ambient, std::size_t net_points) {
    double worst = 0.0;
    for (std::size_t i = 0; i < net_points; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < net_points; ++j) {
            if (j != i) {
                nearest = std::min(nearest, ambient(i, j));
            }
        }
        worst = std::max(worst, nearest);
    }
    return worst;
}

struct StabilityRow {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double covering = 0.0;         ///< R(X)
    double second_covering = 0.0;  ///< R(X')
    double left = 0.0;             ///< dGH(eps_X, eps_X') or an upper bound on it
    double bound = 0.0;            ///< 2(R(X) + R(X'))
    bool exact = false;
    bool pass = false;
};

struct ExperimentOptions {
    SamplingOptions sampling;
    /// Exact GH is used when 2n is at most this.
    std::size_t exact_limit = kDefaultExhaustiveLimit;
};

/// Correspondence pairing every point with a nearest point of the other set.
inline Correspondence nearest_neighbour_correspondence(const PointCloud& ambient, std::span<const std::size_t> a,
                                                       std::span<const std::size_t> b) {
    Correspondence relation;
    const auto nearest = [&](std::size_t p, std::span<const std::size_t> in) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < in.size(); ++k) {
            if (ambient(p, in[k]) < ambient(p, in[best])) {
                best = k;
            }
        }
        return best;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
        relation.emplace_back(i, nearest(a[i], b));
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        relation.emplace_back(nearest(b[j], a), j);
    }
    std::sort(relation.begin(), relation.end());
    relation.erase(std::unique(relation.begin(), relation.end()), relation.end());
    return relation;
}

/// One row per (size, seed), ordered by size then seed. The net size is shared
/// across rows: options.sampling.net_size, or 50 times the largest size.
inline std::vector<StabilityRow> stability_experiment(const ShapeSpec& spec, std::span<const std::size_t> sizes,
                                                      std::span<const std::uint64_t> seeds,
                                                      ExperimentOptions options = {}) {
    if (options.sampling.net_size == 0 && !sizes.empty()) {
        options.sampling.net_size = 50 * *std::max_element(sizes.begin(), sizes.end());
    }
    std::vector<StabilityRow> rows;
    for (const std::size_t n : sizes) {
        for (const std::uint64_t seed : seeds) {
            const auto sample = sample_shape(spec, n, seed, options.sampling);
            StabilityRow row;
            row.n = n;
            row.seed = seed;
            row.covering = covering_radius(sample.ambient, sample.sample);
            row.second_covering = covering_radius(sample.ambient, sample.second_sample);
            const auto eps_x = epsilon_metric(sample.ambient.to_metric_space(sample.sample, prefixed_labels("p", n)));
            const auto eps_y =
                epsilon_metric(sample.ambient.to_metric_space(sample.second_sample, prefixed_labels("q", n)));
            row.exact = 2 * n <= options.exact_limit;
            if (row.exact) {
                row.left = gh_exact(eps_x, eps_y, options.exact_limit).value;
            } else {
                const auto relation =
                    nearest_neighbour_correspondence(sample.ambient, sample.sample, sample.second_sample);
                row.left = distortion(relation, eps_x, eps_y);
            }
            row.bound = 2.0 * (row.covering + row.second_covering);
            row.pass = !exceeds(row.left, row.bound);
            rows.push_back(row);
        }
    }
    return rows;
}

struct ConvergenceRow {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double covering = 0.0;    ///< R(X)
    double separation = 0.0;  ///< delta, least gap between components
    double distortion = 0.0;  ///< distortion of {(x, alpha(x))} under eps_X and eps_A
    double bound = 0.0;       ///< 2 R(X)
    bool sandwich = false;    ///< eps_A <= eps_X <= eps_A + 2R(X) on every pair
    bool pass = false;
};

struct ConvergenceTable {
    FiniteMetricSpace components;  ///< (A, d_A)
    double net_spacing = 0.0;
    std::vector<ConvergenceRow> rows;
};

/// Throws SampleTooSparse when some row has R(X) >= delta/2.
inline ConvergenceTable convergence_experiment(const ShapeSpec& spec, std::span<const std::size_t> sizes,
                                               std::span<const std::uint64_t> seeds, ExperimentOptions options = {}) {
    if (options.sampling.net_size == 0 && !sizes.empty()) {
        options.sampling.net_size = 50 * *std::max_element(sizes.begin(), sizes.end());
    }
    ConvergenceTable table;
    bool first = true;
    for (const std::size_t n : sizes) {
        for (const std::uint64_t seed : seeds) {
            const auto sample = sample_shape(spec, n, seed, options.sampling);
            if (first) {
                table.components = component_space(sample);
                table.net_spacing = net_spacing(sample.ambient, sample.ambient.size() - 2 * n);
                first = false;
            }
            const auto eps_a = epsilon_metric(table.components);
            ConvergenceRow row;
            row.n = n;
            row.seed = seed;
            row.covering = covering_radius(sample.ambient, sample.sample);
            row.separation = table.components.size() < 2 ? std::numeric_limits<double>::infinity()
                                                         : separation(table.components);
            if (!(row.covering < row.separation / 2.0)) {
                throw Error("SampleTooSparse", "n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                                                   ": covering radius " + std::to_string(row.covering) +
                                                   " is not below half the component gap " +
                                                   std::to_string(row.separation / 2.0));
            }
            const auto eps_x = epsilon_metric(sample.ambient.to_metric_space(sample.sample, prefixed_labels("p", n)));
            std::vector<std::size_t> alpha;
            for (const std::size_t i : sample.sample) {
                alpha.push_back(sample.component[i]);
            }
            row.bound = 2.0 * row.covering;
            row.sandwich = true;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double lower = eps_a(alpha[i], alpha[j]);
                    const double value = eps_x(i, j);
                    row.distortion = std::max(row.distortion, std::abs(value - lower));
                    row.sandwich = row.sandwich && !exceeds(lower, value) && !exceeds(value, lower + row.bound);
                }
            }
            row.pass = row.sandwich && !exceeds(row.distortion, row.bound);
            table.rows.push_back(row);
        }
    }
    return table;
}

}  // namespace funclust
