#pragma once

// Partitions, persistent sets and dendrograms.
//
// A PersistentSet stores a sorted list of breakpoints r_1 < ... < r_k and
// one partition per half-open interval [0, r_1), [r_1, r_2), ..., [r_k, inf).
// Partitions are kept in canonical form: points sorted within each block,
// blocks ordered by their least point index.

#include "funclust/error.hpp"
#include "funclust/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace funclust {

class Partition {
  public:
    Partition() = default;

    static Partition discrete(std::size_t n) {
        std::vector<std::size_t> id(n);
        for (std::size_t i = 0; i < n; ++i) {
            id[i] = i;
        }
        return from_assignment(id);
    }

    static Partition single_block(std::size_t n) { return from_assignment(std::vector<std::size_t>(n, 0)); }

    /// Any labelling of points by block id; ids need not be dense.
    static Partition from_assignment(std::span<const std::size_t> block_id) {
        Partition p;
        p.owner_.resize(block_id.size());
        std::unordered_map<std::size_t, std::size_t> remap;  // raw id -> canonical id
        for (std::size_t i = 0; i < block_id.size(); ++i) {
            const auto [it, inserted] = remap.try_emplace(block_id[i], p.blocks_.size());
            const std::size_t canonical = it->second;
            if (inserted) {
                p.blocks_.emplace_back();
            }
            p.owner_[i] = canonical;
            p.blocks_[canonical].push_back(i);
        }
        return p;
    }

    /// Throws InvalidPartition unless the blocks are nonempty, disjoint and cover 0..n-1.
    static Partition from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks) {
        std::vector<std::size_t> id(n, n);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b].empty()) {
                throw Error("InvalidPartition", "empty block");
            }
            for (const std::size_t x : blocks[b]) {
                if (x >= n) {
                    throw Error("InvalidPartition", "point " + std::to_string(x) + " outside ground set");
                }
                if (id[x] != n) {
                    throw Error("InvalidPartition", "point " + std::to_string(x) + " in two blocks");
                }
                id[x] = b;
            }
        }
        for (std::size_t x = 0; x < n; ++x) {
            if (id[x] == n) {
                throw Error("InvalidPartition", "point " + std::to_string(x) + " in no block");
            }
        }
        return from_assignment(id);
    }

    std::size_t ground_size() const { return owner_.size(); }
    std::size_t block_count() const { return blocks_.size(); }
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    std::size_t block_of(std::size_t point) const { return owner_[point]; }
    bool is_discrete() const { return blocks_.size() == owner_.size(); }
    bool is_single_block() const { return blocks_.size() <= 1; }

    friend bool operator==(const Partition&, const Partition&) = default;

  private:
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<std::size_t> owner_;
};

/// True iff every block of `fine` lies inside a block of `coarse`.
inline bool refines(const Partition& fine, const Partition& coarse) {
    if (fine.ground_size() != coarse.ground_size()) {
        throw Error("GroundSetMismatch", "partitions of sets of size " + std::to_string(fine.ground_size()) + " and " +
                                             std::to_string(coarse.ground_size()));
    }
    for (const auto& block : fine.blocks()) {
        const std::size_t target = coarse.block_of(block.front());
        for (const std::size_t x : block) {
            if (coarse.block_of(x) != target) {
                return false;
            }
        }
    }
    return true;
}

/// Partition of the domain into the nonempty preimages of the blocks of `codomain_partition`.
inline Partition pullback(const SetMap& f, const Partition& codomain_partition) {
    if (codomain_partition.ground_size() != f.codomain().size()) {
        throw Error("GroundSetMismatch", "partition does not live on the codomain of the map");
    }
    std::vector<std::size_t> id(f.domain().size());
    for (std::size_t x = 0; x < id.size(); ++x) {
        id[x] = codomain_partition.block_of(f(x));
    }
    return Partition::from_assignment(id);
}

class PersistentSet {
  public:
    struct Step {
        double height;
        Partition partition;
    };

    PersistentSet() = default;

    /// Normalises a sequence of (height, partition) steps: heights within
    /// kHeightTolerance of the previous breakpoint (or of 0) collapse into it,
    /// steps that do not change the partition are dropped. Throws
    /// NotMonotone if some step does not coarsen its predecessor.
    static PersistentSet build(std::vector<std::string> labels, Partition initial, std::vector<Step> steps) {
        const std::size_t n = labels.size();
        if (initial.ground_size() != n) {
            throw Error("GroundSetMismatch", "initial partition size differs from label count");
        }
        std::stable_sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.height < b.height; });
        PersistentSet p;
        p.labels_ = std::move(labels);
        p.partitions_.push_back(std::move(initial));
        for (auto& step : steps) {
            if (step.height < 0.0) {
                throw Error("NegativeScale", "breakpoint below zero");
            }
            if (step.partition.ground_size() != n) {
                throw Error("GroundSetMismatch", "step partition size differs from label count");
            }
            if (!refines(p.partitions_.back(), step.partition)) {
                throw Error("NotMonotone", "partition at " + std::to_string(step.height) + " does not coarsen the previous one");
            }
            const double last = p.breakpoints_.empty() ? 0.0 : p.breakpoints_.back();
            if (step.height - last <= kHeightTolerance) {
                p.partitions_.back() = std::move(step.partition);
            } else if (!(step.partition == p.partitions_.back())) {
                p.breakpoints_.push_back(step.height);
                p.partitions_.push_back(std::move(step.partition));
            }
        }
        p.drop_redundant();
        return p;
    }

    static PersistentSet constant(std::vector<std::string> labels, Partition partition) {
        return build(std::move(labels), std::move(partition), {});
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// partitions()[0] holds on [0, r_1); partitions()[i] on [r_i, r_{i+1}).
    const std::vector<Partition>& partitions() const { return partitions_; }
    const Partition& final_partition() const { return partitions_.back(); }

    bool is_dendrogram() const { return final_partition().is_single_block(); }

  private:
    void drop_redundant() {
        std::vector<double> bps;
        std::vector<Partition> parts{partitions_.front()};
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            if (!(partitions_[i + 1] == parts.back())) {
                bps.push_back(breakpoints_[i]);
                parts.push_back(partitions_[i + 1]);
            }
        }
        breakpoints_ = std::move(bps);
        partitions_ = std::move(parts);
    }

    std::vector<std::string> labels_;
    std::vector<double> breakpoints_;
    std::vector<Partition> partitions_;
};

/// Same labels and partitions, breakpoints equal within `tolerance`.
inline bool equivalent(const PersistentSet& a, const PersistentSet& b, double tolerance = kHeightTolerance) {
    if (a.labels() != b.labels() || a.breakpoints().size() != b.breakpoints().size() ||
        !(a.partitions() == b.partitions())) {
        return false;
    }
    for (std::size_t i = 0; i < a.breakpoints().size(); ++i) {
        if (std::abs(a.breakpoints()[i] - b.breakpoints()[i]) > tolerance) {
            return false;
        }
    }
    return true;
}

/// Partition in force at scale r (right-continuous).
inline const Partition& theta_at(const PersistentSet& p, double r) {
    if (r < 0.0) {
        throw Error("NegativeScale", "scale must be non-negative");
    }
    const auto& bps = p.breakpoints();
    const auto idx = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), r) - bps.begin());
    return p.partitions()[idx];
}

/// Failure of refinement: `first` and `second` share a block of the source
/// partition at `scale` but their images lie in different target blocks.
/// The refinement fails on all of [interval_begin, interval_end); `scale`
/// is that interval's midpoint (its start when the interval is unbounded).
struct PreservationWitness {
    double scale = 0.0;
    double interval_begin = 0.0;
    double interval_end = 0.0;
    std::size_t first = 0;
    std::size_t second = 0;
};

struct PreservationVerdict {
    bool preserving = true;
    std::optional<PreservationWitness> witness;

    explicit operator bool() const { return preserving; }
};

/// Checks that theta(r) refines f*(eta(r)) for every r. Partitions are
/// constant between the union of both breakpoint lists, so one evaluation
/// per elementary interval decides; the earliest failing interval is reported.
inline PreservationVerdict is_persistence_preserving(const SetMap& f, const PersistentSet& source, const PersistentSet& target) {
    if (f.domain().size() != source.size() || f.codomain().size() != target.size()) {
        throw Error("GroundSetMismatch", "map does not go between the ground sets of the persistent sets");
    }
    std::vector<double> cuts{0.0};
    cuts.insert(cuts.end(), source.breakpoints().begin(), source.breakpoints().end());
    cuts.insert(cuts.end(), target.breakpoints().begin(), target.breakpoints().end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t c = 0; c < cuts.size(); ++c) {
        const double r = cuts[c];
        const Partition& theta = theta_at(source, r);
        const Partition& eta = theta_at(target, r);
        for (const auto& block : theta.blocks()) {
            const std::size_t anchor = block.front();
            for (const std::size_t x : block) {
                if (eta.block_of(f(x)) != eta.block_of(f(anchor))) {
                    PreservationWitness w;
                    w.interval_begin = r;
                    w.interval_end = c + 1 < cuts.size() ? cuts[c + 1] : std::numeric_limits<double>::infinity();
                    w.scale = c + 1 < cuts.size() ? 0.5 * (r + cuts[c + 1]) : r;
                    w.first = anchor;
                    w.second = x;
                    return {false, w};
                }
            }
        }
    }
    return {true, std::nullopt};
}

/// theta^lambda(r) = theta(r / lambda): breakpoints scale by lambda.
inline PersistentSet scale_persistent(const PersistentSet& p, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw Error("NonpositiveScale", "scale factor must be positive");
    }
    std::vector<PersistentSet::Step> steps;
    for (std::size_t i = 0; i < p.breakpoints().size(); ++i) {
        steps.push_back({factor * p.breakpoints()[i], p.partitions()[i + 1]});
    }
    return PersistentSet::build(p.labels(), p.partitions().front(), std::move(steps));
}

/// d(x, x') = least scale at which x and x' share a block. The result is an
/// ultrametric (pseudo, since points merged at 0 get distance 0).
inline FiniteMetricSpace persistent_to_pseudometric(const PersistentSet& p) {
    if (!p.is_dendrogram()) {
        throw Error("NotADendrogram", "final partition has " + std::to_string(p.final_partition().block_count()) + " blocks");
    }
    const std::size_t n = p.size();
    constexpr double unset = -1.0;
    SquareMatrix d(n, unset);
    const auto assign = [&](const Partition& part, double height) {
        for (const auto& block : part.blocks()) {
            for (std::size_t a = 0; a < block.size(); ++a) {
                for (std::size_t b = a + 1; b < block.size(); ++b) {
                    if (d(block[a], block[b]) == unset) {
                        d.set_symmetric(block[a], block[b], height);
                    }
                }
            }
        }
    };
    assign(p.partitions().front(), 0.0);
    for (std::size_t i = 0; i < p.breakpoints().size(); ++i) {
        assign(p.partitions()[i + 1], p.breakpoints()[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) = 0.0;
    }
    return FiniteMetricSpace::unchecked(p.labels(), std::move(d), true);
}

struct IntervalEntry {
    double begin;
    double end;     ///< infinity for the final interval
    double length;  ///< infinity for the final interval
    Partition partition;
};

inline std::vector<IntervalEntry> interval_report(const PersistentSet& p) {
    std::vector<IntervalEntry> out;
    const auto& bps = p.breakpoints();
    for (std::size_t i = 0; i < p.partitions().size(); ++i) {
        const double begin = i == 0 ? 0.0 : bps[i - 1];
        const double end = i < bps.size() ? bps[i] : std::numeric_limits<double>::infinity();
        out.push_back({begin, end, end - begin, p.partitions()[i]});
    }
    return out;
}

}  // namespace funclust
