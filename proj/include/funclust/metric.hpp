#pragma once

// Finite metric spaces, set maps between them and the metric constructions
// the rest of the library is built on (scaling, path-length closure,
// quotient by the single-linkage relation).

#include "funclust/error.hpp"
#include "funclust/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace funclust {

/// Relative tolerance for symmetry, triangle and isometry checks.
inline constexpr double kRelativeTolerance = 1e-9;

/// Absolute tolerance under which two merge heights count as the same scale.
inline constexpr double kHeightTolerance = 1e-9;

namespace detail {

inline double tolerance_for(double a, double b) {
    return kRelativeTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace detail

/// a > b beyond the relative tolerance.
inline bool exceeds(double a, double b) { return a - b > detail::tolerance_for(a, b); }

inline bool approx_equal(double a, double b) { return std::abs(a - b) <= detail::tolerance_for(a, b); }

inline std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
    }
    return labels;
}

/// Dense row-major n x n matrix of lengths.
class SquareMatrix {
  public:
    SquareMatrix() = default;

    explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_{n}
      , data_(n * n, fill) {}

    /// Throws BadShape unless every row has exactly rows.size() entries.
    explicit SquareMatrix(const std::vector<std::vector<double>>& rows)
      : n_{rows.size()}
      , data_(rows.size() * rows.size()) {
        for (std::size_t i = 0; i < n_; ++i) {
            if (rows[i].size() != n_) {
                throw Error("BadShape", "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                            " entries, expected " + std::to_string(n_));
            }
            std::copy(rows[i].begin(), rows[i].end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n_));
        }
    }

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

    /// Writes both (i, j) and (j, i).
    void set_symmetric(std::size_t i, std::size_t j, double value) {
        data_[i * n_ + j] = value;
        data_[j * n_ + i] = value;
    }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Labelled finite (pseudo)metric space. Instances produced by
/// validate_metric satisfy symmetry, zero diagonal and the triangle
/// inequality within kRelativeTolerance; when `pseudo()` is false all
/// off-diagonal distances are strictly positive.
class FiniteMetricSpace {
  public:
    FiniteMetricSpace() = default;

    /// Skips validation; callers guarantee the metric axioms.
    static FiniteMetricSpace unchecked(std::vector<std::string> labels, SquareMatrix dist, bool pseudo) {
        FiniteMetricSpace space;
        space.labels_ = std::move(labels);
        space.dist_ = std::move(dist);
        space.pseudo_ = pseudo;
        return space;
    }

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    bool pseudo() const { return pseudo_; }

    double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }

    const SquareMatrix& matrix() const { return dist_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    std::optional<std::size_t> index_of(std::string_view label) const {
        const auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

    double diameter() const {
        double best = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = i + 1; j < size(); ++j) {
                best = std::max(best, dist_(i, j));
            }
        }
        return best;
    }

    /// Subspace on the given points, in the given order, with the restricted metric.
    FiniteMetricSpace restrict_to(std::span<const std::size_t> points) const {
        SquareMatrix sub(points.size());
        std::vector<std::string> labels;
        labels.reserve(points.size());
        for (std::size_t a = 0; a < points.size(); ++a) {
            labels.push_back(labels_[points[a]]);
            for (std::size_t b = 0; b < points.size(); ++b) {
                sub(a, b) = dist_(points[a], points[b]);
            }
        }
        return unchecked(std::move(labels), std::move(sub), pseudo_);
    }

    friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

  private:
    std::vector<std::string> labels_;
    SquareMatrix dist_;
    bool pseudo_ = false;
};

/// Points in R^d with the Euclidean metric, evaluated on demand. Used for
/// ambient nets that are too large to store as a distance matrix.
class PointCloud {
  public:
    PointCloud() = default;

    explicit PointCloud(std::size_t dimension)
      : dim_{dimension} {}

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }

    std::size_t add(std::span<const double> point) {
        if (point.size() != dim_) {
            throw Error("BadShape", "point has " + std::to_string(point.size()) + " coordinates, expected " +
                                        std::to_string(dim_));
        }
        coords_.insert(coords_.end(), point.begin(), point.end());
        return size() - 1;
    }

    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }

    double operator()(std::size_t i, std::size_t j) const {
        double sum = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            const double diff = coords_[i * dim_ + k] - coords_[j * dim_ + k];
            sum += diff * diff;
        }
        return std::sqrt(sum);
    }

    /// Materialised metric space on a subset (all points when `points` is empty).
    FiniteMetricSpace to_metric_space(std::span<const std::size_t> points = {}, std::vector<std::string> labels = {}) const {
        std::vector<std::size_t> all;
        if (points.empty()) {
            all.resize(size());
            for (std::size_t i = 0; i < all.size(); ++i) {
                all[i] = i;
            }
            points = all;
        }
        if (labels.empty()) {
            labels = default_labels(points.size());
        }
        SquareMatrix dist(points.size());
        bool pseudo = false;
        for (std::size_t a = 0; a < points.size(); ++a) {
            for (std::size_t b = a + 1; b < points.size(); ++b) {
                const double d = (*this)(points[a], points[b]);
                pseudo = pseudo || d == 0.0;
                dist.set_symmetric(a, b, d);
            }
        }
        return FiniteMetricSpace::unchecked(std::move(labels), std::move(dist), pseudo);
    }

  private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// Validates the metric axioms. Errors: BadShape, NonFinite, NegativeEntry,
/// NonzeroDiagonal, Asymmetric, ZeroOffDiagonal (strict spaces only) and
/// TriangleViolation(i,j,k) meaning d(i,j) > d(i,k) + d(k,j).
inline FiniteMetricSpace validate_metric(const SquareMatrix& matrix, bool pseudo, std::vector<std::string> labels = {}) {
    const std::size_t n = matrix.size();
    if (labels.empty()) {
        labels = default_labels(n);
    }
    if (labels.size() != n) {
        throw Error("BadShape", std::to_string(labels.size()) + " labels for a " + std::to_string(n) + "-point matrix");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = matrix(i, j);
            if (!std::isfinite(v)) {
                throw Error("NonFinite", "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (v < 0.0) {
                throw Error("NegativeEntry", "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix(i, i) != 0.0) {
            throw Error("NonzeroDiagonal", "entry (" + std::to_string(i) + "," + std::to_string(i) + ")");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!approx_equal(matrix(i, j), matrix(j, i))) {
                throw Error("Asymmetric", "entries (" + std::to_string(i) + "," + std::to_string(j) + ") and (" +
                                              std::to_string(j) + "," + std::to_string(i) + ")");
            }
            if (!pseudo && matrix(i, j) == 0.0) {
                throw Error("ZeroOffDiagonal", "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) {
                    continue;
                }
                if (exceeds(matrix(i, j), matrix(i, k) + matrix(k, j))) {
                    throw Error("TriangleViolation",
                                "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
                }
            }
        }
    }
    // Store the symmetrised matrix so downstream code can rely on exact symmetry.
    SquareMatrix sym(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sym.set_symmetric(i, j, matrix(i, j));
        }
    }
    return FiniteMetricSpace::unchecked(std::move(labels), std::move(sym), pseudo);
}

inline FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& rows, bool pseudo,
                                         std::vector<std::string> labels = {}) {
    return validate_metric(SquareMatrix(rows), pseudo, std::move(labels));
}

/// Minimum off-diagonal distance. Throws TooFewPoints when n < 2.
inline double separation(const FiniteMetricSpace& space) {
    if (space.size() < 2) {
        throw Error("TooFewPoints", "separation needs at least two points");
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            best = std::min(best, space(i, j));
        }
    }
    return best;
}

inline FiniteMetricSpace scale_metric(const FiniteMetricSpace& space, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw Error("NonpositiveScale", "scale factor must be positive");
    }
    SquareMatrix dist(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            dist.set_symmetric(i, j, factor * space(i, j));
        }
    }
    return FiniteMetricSpace::unchecked(space.labels(), std::move(dist), space.pseudo());
}

/// Shortest-path closure of a symmetric weight matrix: the largest
/// pseudometric bounded above by `weights` pointwise.
inline FiniteMetricSpace path_metric(const SquareMatrix& weights, std::vector<std::string> labels = {}) {
    const std::size_t n = weights.size();
    if (labels.empty()) {
        labels = default_labels(n);
    }
    if (labels.size() != n) {
        throw Error("BadShape", std::to_string(labels.size()) + " labels for a " + std::to_string(n) + "-point matrix");
    }
    SquareMatrix d = weights;
    for (std::size_t i = 0; i < n; ++i) {
        if (d(i, i) != 0.0) {
            throw Error("NonzeroDiagonal", "weight (" + std::to_string(i) + "," + std::to_string(i) + ")");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(d(i, j) >= 0.0) || std::isnan(d(i, j))) {
                throw Error("NegativeEntry", "weight (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (d(i, j) != d(j, i)) {
                throw Error("Asymmetric", "weights (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double dik = d(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                const double through = dik + d(k, j);
                if (through < d(i, j)) {
                    d(i, j) = through;
                }
            }
        }
    }
    bool pseudo = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pseudo = pseudo || d(i, j) == 0.0;
        }
    }
    return FiniteMetricSpace::unchecked(std::move(labels), std::move(d), pseudo);
}

/// Total map between two labelled finite sets.
class SetMap {
  public:
    SetMap() = default;

    SetMap(std::vector<std::string> domain, std::vector<std::string> codomain, std::vector<std::size_t> image)
      : domain_{std::move(domain)}
      , codomain_{std::move(codomain)}
      , image_{std::move(image)} {
        if (image_.size() != domain_.size()) {
            throw Error("InvalidMap", "image has " + std::to_string(image_.size()) + " entries for " +
                                          std::to_string(domain_.size()) + " domain points");
        }
        for (const std::size_t y : image_) {
            if (y >= codomain_.size()) {
                throw Error("InvalidMap", "image index " + std::to_string(y) + " outside codomain");
            }
        }
    }

    static SetMap identity(const std::vector<std::string>& labels) {
        std::vector<std::size_t> image(labels.size());
        for (std::size_t i = 0; i < image.size(); ++i) {
            image[i] = i;
        }
        return SetMap(labels, labels, std::move(image));
    }

    /// Builds the map from (domain label, codomain label) pairs.
    static SetMap from_pairs(std::vector<std::string> domain, std::vector<std::string> codomain,
                             const std::vector<std::pair<std::string, std::string>>& pairs) {
        const auto find = [](const std::vector<std::string>& v, const std::string& s) -> std::size_t {
            const auto it = std::find(v.begin(), v.end(), s);
            if (it == v.end()) {
                throw Error("InvalidMap", "unknown label '" + s + "'");
            }
            return static_cast<std::size_t>(it - v.begin());
        };
        std::vector<std::size_t> image(domain.size(), codomain.size());
        for (const auto& [from, to] : pairs) {
            image[find(domain, from)] = find(codomain, to);
        }
        for (std::size_t i = 0; i < image.size(); ++i) {
            if (image[i] == codomain.size()) {
                throw Error("InvalidMap", "no image for '" + domain[i] + "'");
            }
        }
        return SetMap(std::move(domain), std::move(codomain), std::move(image));
    }

    std::size_t operator()(std::size_t x) const { return image_[x]; }

    const std::vector<std::string>& domain() const { return domain_; }
    const std::vector<std::string>& codomain() const { return codomain_; }
    const std::vector<std::size_t>& image() const { return image_; }

    bool injective() const {
        std::vector<bool> hit(codomain_.size(), false);
        for (const std::size_t y : image_) {
            if (hit[y]) {
                return false;
            }
            hit[y] = true;
        }
        return true;
    }

    bool surjective() const {
        std::vector<bool> hit(codomain_.size(), false);
        for (const std::size_t y : image_) {
            hit[y] = true;
        }
        return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    }

    friend bool operator==(const SetMap&, const SetMap&) = default;

  private:
    std::vector<std::string> domain_;
    std::vector<std::string> codomain_;
    std::vector<std::size_t> image_;
};

/// g after f. Throws LabelMismatch unless f's codomain is g's domain.
inline SetMap compose(const SetMap& g, const SetMap& f) {
    if (f.codomain() != g.domain()) {
        throw Error("LabelMismatch", "cannot compose: codomain of the first map is not the domain of the second");
    }
    std::vector<std::size_t> image(f.domain().size());
    for (std::size_t x = 0; x < image.size(); ++x) {
        image[x] = g(f(x));
    }
    return SetMap(f.domain(), g.codomain(), std::move(image));
}

/// Ordered so that isometry > monic > general > none.
enum class MorphismClass { none, general, monic, isometry };

inline std::string_view to_string(MorphismClass c) {
    switch (c) {
        case MorphismClass::none: return "none";
        case MorphismClass::general: return "general";
        case MorphismClass::monic: return "monic";
        case MorphismClass::isometry: return "isometry";
    }
    return "none";
}

/// Finest class of `f` as a morphism X -> Y: `none` if some distance grows,
/// `isometry` for distance-preserving bijections, `monic` for injective
/// distance non-increasing maps, otherwise `general`.
inline MorphismClass classify_morphism(const SetMap& f, const FiniteMetricSpace& source, const FiniteMetricSpace& target) {
    if (f.domain() != source.labels() || f.codomain() != target.labels()) {
        throw Error("LabelMismatch", "map labels do not match the given spaces");
    }
    bool preserves = true;
    for (std::size_t i = 0; i < source.size(); ++i) {
        for (std::size_t j = i + 1; j < source.size(); ++j) {
            const double before = source(i, j);
            const double after = target(f(i), f(j));
            if (exceeds(after, before)) {
                return MorphismClass::none;
            }
            preserves = preserves && approx_equal(after, before);
        }
    }
    if (!f.injective()) {
        return MorphismClass::general;
    }
    if (f.surjective() && preserves) {
        return MorphismClass::isometry;
    }
    return MorphismClass::monic;
}

/// Blocks of the relation "joined by a chain with steps <= r", as sorted
/// point lists ordered by least member.
inline std::vector<std::vector<std::size_t>> chain_classes(const FiniteMetricSpace& space, double r) {
    DisjointSets sets(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            if (space(i, j) <= r) {
                sets.unite(i, j);
            }
        }
    }
    const auto id = sets.assignment();
    std::size_t count = 0;
    for (const std::size_t b : id) {
        count = std::max(count, b + 1);
    }
    std::vector<std::vector<std::size_t>> blocks(count);
    for (std::size_t i = 0; i < id.size(); ++i) {
        blocks[id[i]].push_back(i);
    }
    return blocks;
}

struct Quotient {
    FiniteMetricSpace space;  ///< one point per class, path metric of min cross distances
    SetMap projection;        ///< sends each point to its class
};

/// The space of classes at scale r. Block labels are "{a,b,...}".
inline Quotient quotient_at_scale(const FiniteMetricSpace& space, double r) {
    if (r < 0.0) {
        throw Error("NegativeScale", "scale must be non-negative");
    }
    const auto blocks = chain_classes(space, r);
    const std::size_t k = blocks.size();
    std::vector<std::size_t> owner(space.size());
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < k; ++b) {
        std::string label = "{";
        for (std::size_t t = 0; t < blocks[b].size(); ++t) {
            owner[blocks[b][t]] = b;
            label += (t ? "," : "") + space.label(blocks[b][t]);
        }
        labels.push_back(label + "}");
    }
    SquareMatrix weights(k, std::numeric_limits<double>::infinity());
    for (std::size_t b = 0; b < k; ++b) {
        weights(b, b) = 0.0;
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            const std::size_t a = owner[i];
            const std::size_t b = owner[j];
            if (a != b && space(i, j) < weights(a, b)) {
                weights.set_symmetric(a, b, space(i, j));
            }
        }
    }
    auto quotient = path_metric(weights, labels);
    quotient = FiniteMetricSpace::unchecked(quotient.labels(), quotient.matrix(), false);
    SetMap projection(space.labels(), std::move(labels), std::move(owner));
    return {std::move(quotient), std::move(projection)};
}

}  // namespace funclust
