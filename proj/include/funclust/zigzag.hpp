#pragma once

// Bootstrap zigzags of flat clusterings and their interval decomposition
// over the two-element field.
//
// Index convention for N samples S_1..S_N: V_0 = S_1, V_1 = S_1 u S_2,
// V_2 = S_2, ..., V_{2N-2} = S_N. Arrows point from sample to union, so the
// arrow between V_{2i} and V_{2i+1} is forward and the one between V_{2i+1}
// and V_{2i+2} is backward.

#include "funclust/error.hpp"
#include "funclust/f2.hpp"
#include "funclust/linkage.hpp"
#include "funclust/metric.hpp"
#include "funclust/random.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace funclust {

/// A map between V_i and V_{i+1}: forward means V_i -> V_{i+1}.
struct SetArrow {
    bool forward = true;
    std::vector<std::size_t> image;  ///< image[j] for each element j of the source
};

struct BootstrapSample {
    std::vector<std::size_t> points;        ///< distinct indices into X, ascending
    std::vector<std::size_t> multiplicity;  ///< draws per point
};

struct ZigZagSetDiagram {
    std::vector<BootstrapSample> samples;
    /// Blocks at every index; each block lists indices into X, ascending.
    std::vector<std::vector<std::vector<std::size_t>>> blocks;
    std::vector<SetArrow> arrows;  ///< arrows[i] joins index i and i + 1
};

struct F2Arrow {
    bool forward = true;
    F2Matrix matrix;  ///< target dimension x source dimension
};

struct ZigZagF2Diagram {
    std::vector<std::size_t> dims;
    std::vector<F2Arrow> arrows;  ///< arrows[i] joins index i and i + 1
};

struct Bar {
    std::size_t birth = 0;
    std::size_t death = 0;  ///< last index of the interval, inclusive

    auto operator<=>(const Bar&) const = default;
};

using Barcode = std::vector<Bar>;

struct BootstrapOptions {
    std::size_t sample_size = 1;
    std::size_t sample_count = 2;
    double eps = 1.0;
    std::uint64_t seed = 0;
};

/// Draws sample_count samples of sample_size points with replacement, collapses
/// repeats, and clusters every sample and every union of neighbouring samples
/// by single linkage at the fixed threshold eps. Each block maps to the block
/// of the union containing it.
inline ZigZagSetDiagram bootstrap_zigzag(const FiniteMetricSpace& space, const BootstrapOptions& options) {
    if (options.sample_size == 0 || space.empty()) {
        throw Error("EmptySample", "samples must contain at least one point");
    }
    if (options.sample_count < 2) {
        throw Error("BadParameter", "need at least two samples");
    }
    if (!(options.eps > 0.0)) {
        throw Error("BadParameter", "threshold must be positive");
    }
    ZigZagSetDiagram diagram;
    for (std::size_t s = 0; s < options.sample_count; ++s) {
        auto rng = make_rng(options.seed, s);
        std::uniform_int_distribution<std::size_t> pick(0, space.size() - 1);
        std::map<std::size_t, std::size_t> counts;
        for (std::size_t k = 0; k < options.sample_size; ++k) {
            ++counts[pick(rng)];
        }
        BootstrapSample sample;
        for (const auto& [point, count] : counts) {
            sample.points.push_back(point);
            sample.multiplicity.push_back(count);
        }
        diagram.samples.push_back(std::move(sample));
    }

    const auto block_index = [](const std::vector<std::vector<std::size_t>>& blocks, std::size_t point) {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (std::binary_search(blocks[b].begin(), blocks[b].end(), point)) {
                return b;
            }
        }
        throw Error("InvalidMap", "point " + std::to_string(point) + " missing from the union clustering");
    };
    const auto induced = [&](const std::vector<std::vector<std::size_t>>& from,
                             const std::vector<std::vector<std::size_t>>& to) {
        std::vector<std::size_t> image;
        for (const auto& block : from) {
            image.push_back(block_index(to, block.front()));
        }
        return image;
    };

    for (std::size_t s = 0; s < options.sample_count; ++s) {
        const auto& points = diagram.samples[s].points;
        diagram.blocks.push_back(threshold_blocks(space, points, options.eps));
        if (s + 1 == options.sample_count) {
            break;
        }
        std::vector<std::size_t> merged;
        const auto& next = diagram.samples[s + 1].points;
        std::set_union(points.begin(), points.end(), next.begin(), next.end(), std::back_inserter(merged));
        diagram.blocks.push_back(threshold_blocks(space, merged, options.eps));
    }
    for (std::size_t i = 0; i + 1 < diagram.blocks.size(); ++i) {
        const bool forward = i % 2 == 0;
        const auto& sample_blocks = forward ? diagram.blocks[i] : diagram.blocks[i + 1];
        const auto& union_blocks = forward ? diagram.blocks[i + 1] : diagram.blocks[i];
        diagram.arrows.push_back({forward, induced(sample_blocks, union_blocks)});
    }
    return diagram;
}

/// Basis of F2[B] is the list of blocks in order; column j of each matrix is
/// the unit vector of the block that block j maps to.
inline ZigZagF2Diagram linearize(const ZigZagSetDiagram& diagram) {
    ZigZagF2Diagram out;
    for (const auto& blocks : diagram.blocks) {
        out.dims.push_back(blocks.size());
    }
    for (std::size_t i = 0; i < diagram.arrows.size(); ++i) {
        const auto& arrow = diagram.arrows[i];
        const std::size_t target = arrow.forward ? i + 1 : i;
        out.arrows.push_back({arrow.forward, F2Matrix::from_map(out.dims[target], arrow.image)});
    }
    return out;
}

inline void check_shapes(const ZigZagF2Diagram& diagram) {
    if (diagram.dims.empty()) {
        throw Error("ShapeMismatch", "diagram has no vertices");
    }
    if (diagram.arrows.size() + 1 != diagram.dims.size()) {
        throw Error("ShapeMismatch", std::to_string(diagram.dims.size()) + " vertices but " +
                                         std::to_string(diagram.arrows.size()) + " arrows");
    }
    for (std::size_t i = 0; i < diagram.arrows.size(); ++i) {
        const auto& a = diagram.arrows[i];
        const std::size_t source = a.forward ? diagram.dims[i] : diagram.dims[i + 1];
        const std::size_t target = a.forward ? diagram.dims[i + 1] : diagram.dims[i];
        if (a.matrix.cols() != source || a.matrix.rows() != target) {
            throw Error("ShapeMismatch", "arrow " + std::to_string(i) + " is " + std::to_string(a.matrix.rows()) +
                                             "x" + std::to_string(a.matrix.cols()) + ", expected " +
                                             std::to_string(target) + "x" + std::to_string(source));
        }
    }
}

namespace detail {

/// A bar alive at the current index with its generator there.
struct LiveBar {
    std::size_t birth;
    bool born_backward;  ///< born at index birth as the kernel of a backward arrow
    F2Vector generator;
};

/// Order in which a generator may absorb any earlier one without leaving the
/// class of interval decompositions of the prefix: bars born at a backward
/// arrow, latest birth first, then bars born at a forward arrow (or at 0),
/// earliest birth first.
inline bool absorbs_before(const LiveBar& a, const LiveBar& b) {
    if (a.born_backward != b.born_backward) {
        return a.born_backward;
    }
    return a.born_backward ? a.birth > b.birth : a.birth < b.birth;
}

/// Coordinates of each vector of `targets` in the basis `basis`.
inline std::vector<F2Vector> coordinates(const std::vector<F2Vector>& basis, const std::vector<F2Vector>& targets) {
    const std::size_t n = basis.size();
    // Row-reduce [basis | I] to find the inverse via pivots on the vectors.
    std::vector<F2Vector> vecs = basis;
    std::vector<F2Vector> combos;
    for (std::size_t k = 0; k < n; ++k) {
        combos.push_back(F2Vector::unit(n, k));
    }
    std::vector<std::optional<std::size_t>> pivot_owner(n == 0 ? 0 : basis.front().size());
    for (std::size_t k = 0; k < n; ++k) {
        while (auto lead = vecs[k].leading()) {
            if (!pivot_owner[*lead]) {
                pivot_owner[*lead] = k;
                break;
            }
            vecs[k] += vecs[*pivot_owner[*lead]];
            combos[k] += combos[*pivot_owner[*lead]];
        }
    }
    std::vector<F2Vector> out;
    for (F2Vector t : targets) {
        F2Vector coords(n);
        while (auto lead = t.leading()) {
            const std::size_t k = *pivot_owner.at(*lead);
            t += vecs[k];
            coords += combos[k];
        }
        out.push_back(std::move(coords));
    }
    return out;
}

}  // namespace detail

/// Interval decomposition by one left-to-right pass. At each index the live
/// bars carry generators forming a basis of V_i. A forward arrow keeps the
/// bars whose images stay independent of earlier images (in absorption
/// order), ends the others and starts new bars on a complement of the image.
/// A backward arrow puts the image in echelon form with pivots at the latest
/// bar in absorption order; pivot bars continue through preimages, the rest
/// end, and a basis of the kernel starts new bars.
inline Barcode interval_decomposition(const ZigZagF2Diagram& diagram) {
    check_shapes(diagram);
    Barcode bars;
    std::vector<detail::LiveBar> live;
    for (std::size_t k = 0; k < diagram.dims[0]; ++k) {
        live.push_back({0, false, F2Vector::unit(diagram.dims[0], k)});
    }
    for (std::size_t i = 0; i < diagram.arrows.size(); ++i) {
        const auto& arrow = diagram.arrows[i];
        const std::size_t next_dim = diagram.dims[i + 1];
        std::stable_sort(live.begin(), live.end(), detail::absorbs_before);
        std::vector<detail::LiveBar> next;
        if (arrow.forward) {
            std::vector<std::optional<F2Vector>> pivot(next_dim);
            for (const auto& bar : live) {
                F2Vector image = arrow.matrix.apply(bar.generator);
                std::optional<std::size_t> lead;
                while ((lead = image.leading()) && pivot[*lead]) {
                    image += *pivot[*lead];
                }
                if (!lead) {
                    bars.push_back({bar.birth, i});
                    continue;
                }
                pivot[*lead] = image;
                next.push_back({bar.birth, bar.born_backward, image});
            }
            for (std::size_t k = 0; k < next_dim; ++k) {
                F2Vector e = F2Vector::unit(next_dim, k);
                std::optional<std::size_t> lead;
                while ((lead = e.leading()) && pivot[*lead]) {
                    e += *pivot[*lead];
                }
                if (lead) {
                    pivot[*lead] = e;
                    next.push_back({i + 1, false, F2Vector::unit(next_dim, k)});
                }
            }
        } else {
            std::vector<F2Vector> basis;
            for (const auto& bar : live) {
                basis.push_back(bar.generator);
            }
            std::vector<F2Vector> images;
            for (std::size_t j = 0; j < next_dim; ++j) {
                images.push_back(arrow.matrix.column(j));
            }
            // Coordinates index live bars in absorption order, so the leading
            // coordinate is the latest bar.
            auto coords = detail::coordinates(basis, images);
            std::vector<std::optional<std::size_t>> pivot(live.size());
            std::vector<F2Vector> preimage;
            std::vector<bool> continues(live.size(), false);
            std::vector<std::optional<F2Vector>> continued(live.size());
            std::vector<F2Vector> kernel;
            for (std::size_t j = 0; j < next_dim; ++j) {
                preimage.push_back(F2Vector::unit(next_dim, j));
                std::optional<std::size_t> lead;
                while ((lead = coords[j].leading()) && pivot[*lead]) {
                    coords[j] += coords[*pivot[*lead]];
                    preimage[j] += preimage[*pivot[*lead]];
                }
                if (!lead) {
                    kernel.push_back(preimage[j]);
                    continue;
                }
                pivot[*lead] = j;
                continues[*lead] = true;
                continued[*lead] = preimage[j];
            }
            for (std::size_t b = 0; b < live.size(); ++b) {
                if (continues[b]) {
                    next.push_back({live[b].birth, live[b].born_backward, *continued[b]});
                } else {
                    bars.push_back({live[b].birth, i});
                }
            }
            for (auto& v : kernel) {
                next.push_back({i + 1, true, std::move(v)});
            }
        }
        live = std::move(next);
    }
    const std::size_t last = diagram.dims.size() - 1;
    for (const auto& bar : live) {
        bars.push_back({bar.birth, last});
    }
    std::sort(bars.begin(), bars.end());
    return bars;
}

struct BarcodeVerdict {
    bool valid = true;
    std::string reason;  ///< first mismatch found

    explicit operator bool() const { return valid; }
};

/// Necessary conditions for a barcode of the diagram: the bars covering i
/// number dim V_i, and the bars covering both ends of an arrow number its rank.
inline BarcodeVerdict validate_barcode(const ZigZagF2Diagram& diagram, const Barcode& barcode) {
    check_shapes(diagram);
    const std::size_t m = diagram.dims.size();
    for (const auto& bar : barcode) {
        if (bar.birth > bar.death || bar.death >= m) {
            return {false, "bar [" + std::to_string(bar.birth) + "," + std::to_string(bar.death) + "] out of range"};
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const auto covering = std::count_if(barcode.begin(), barcode.end(),
                                            [&](const Bar& b) { return b.birth <= i && i <= b.death; });
        if (static_cast<std::size_t>(covering) != diagram.dims[i]) {
            return {false, "dimension mismatch at " + std::to_string(i) + ": " + std::to_string(covering) +
                               " bars, dimension " + std::to_string(diagram.dims[i])};
        }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const auto spanning = std::count_if(barcode.begin(), barcode.end(),
                                            [&](const Bar& b) { return b.birth <= i && i + 1 <= b.death; });
        const std::size_t rank = diagram.arrows[i].matrix.rank();
        if (static_cast<std::size_t>(spanning) != rank) {
            return {false, "rank mismatch at arrow " + std::to_string(i) + ": " + std::to_string(spanning) +
                               " bars, rank " + std::to_string(rank)};
        }
    }
    return {true, {}};
}

/// Bars covering every index of the diagram.
inline std::size_t full_span_count(const ZigZagF2Diagram& diagram, const Barcode& barcode) {
    const std::size_t last = diagram.dims.size() - 1;
    return static_cast<std::size_t>(
        std::count_if(barcode.begin(), barcode.end(), [&](const Bar& b) { return b.birth == 0 && b.death == last; }));
}

}  // namespace funclust
