#pragma once

// Vectors and matrices over the two-element field, bit-packed.

#include "funclust/error.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace funclust {

class F2Vector {
  public:
    F2Vector() = default;

    explicit F2Vector(std::size_t size)
      : size_{size}
      , words_((size + 63) / 64, 0) {}

    static F2Vector unit(std::size_t size, std::size_t index) {
        F2Vector v(size);
        v.set(index);
        return v;
    }

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

    F2Vector& operator+=(const F2Vector& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            words_[w] ^= other.words_[w];
        }
        return *this;
    }

    bool is_zero() const {
        for (const auto w : words_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    /// Highest set index.
    std::optional<std::size_t> leading() const {
        for (std::size_t w = words_.size(); w-- > 0;) {
            if (words_[w] != 0) {
                return w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[w]));
            }
        }
        return std::nullopt;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (const auto w : words_) {
            c += static_cast<std::size_t>(std::popcount(w));
        }
        return c;
    }

    bool operator==(const F2Vector&) const = default;

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// rows x cols, stored by column.
class F2Matrix {
  public:
    F2Matrix() = default;

    F2Matrix(std::size_t rows, std::size_t cols)
      : rows_{rows}
      , columns_(cols, F2Vector(rows)) {}

    /// Matrix of a set map: column j is the unit vector at image[j].
    static F2Matrix from_map(std::size_t rows, const std::vector<std::size_t>& image) {
        F2Matrix m(rows, image.size());
        for (std::size_t j = 0; j < image.size(); ++j) {
            if (image[j] >= rows) {
                throw Error("ShapeMismatch", "map sends " + std::to_string(j) + " outside " + std::to_string(rows));
            }
            m.columns_[j].set(image[j]);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }
    bool get(std::size_t i, std::size_t j) const { return columns_[j].get(i); }
    void set(std::size_t i, std::size_t j) { columns_[j].set(i); }
    const F2Vector& column(std::size_t j) const { return columns_[j]; }

    F2Vector apply(const F2Vector& v) const {
        if (v.size() != cols()) {
            throw Error("ShapeMismatch", "vector of length " + std::to_string(v.size()) + " against " +
                                             std::to_string(cols()) + " columns");
        }
        F2Vector out(rows_);
        for (std::size_t j = 0; j < cols(); ++j) {
            if (v.get(j)) {
                out += columns_[j];
            }
        }
        return out;
    }

    std::size_t rank() const {
        std::vector<std::optional<F2Vector>> pivot(rows_);
        std::size_t r = 0;
        for (F2Vector c : columns_) {
            while (auto lead = c.leading()) {
                if (!pivot[*lead]) {
                    pivot[*lead] = c;
                    ++r;
                    break;
                }
                c += *pivot[*lead];
            }
        }
        return r;
    }

    bool operator==(const F2Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::vector<F2Vector> columns_;
};

}  // namespace funclust
