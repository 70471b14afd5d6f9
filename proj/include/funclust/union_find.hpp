#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace funclust {

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n)
      : parent_(n)
      , rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    /// Returns false when both elements already share a set.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
        return true;
    }

    std::size_t size() const { return parent_.size(); }

    /// Dense set ids numbered by first appearance in index order.
    std::vector<std::size_t> assignment() {
        std::vector<std::size_t> id(parent_.size());
        std::vector<std::size_t> root_to_id(parent_.size(), parent_.size());
        std::size_t next = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i) {
            const std::size_t r = find(i);
            if (root_to_id[r] == parent_.size()) {
                root_to_id[r] = next++;
            }
            id[i] = root_to_id[r];
        }
        return id;
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
};

}  // namespace funclust
