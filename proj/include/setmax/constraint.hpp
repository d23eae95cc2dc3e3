#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "setmax/subset.hpp"

namespace setmax {

/// Partition matroid over a dense ground set {0..n-1}: disjoint blocks
/// B_1..B_m covering the ground set, each with a capacity 1 <= d_i <= |B_i|.
/// A subset S is feasible iff |S intersect B_i| <= d_i for every block.
class PartitionConstraint {
 public:
  PartitionConstraint(std::vector<std::vector<int>> blocks, std::vector<int> capacities)
      : blocks_(std::move(blocks)), capacities_(std::move(capacities)) {
    if (blocks_.size() != capacities_.size()) {
      throw std::invalid_argument("PartitionConstraint: one capacity per block required");
    }
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.size();
    element_block_.assign(n, -1);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      auto& b = blocks_[i];
      if (b.empty()) throw std::invalid_argument("PartitionConstraint: empty block");
      if (capacities_[i] < 1 || capacities_[i] > static_cast<int>(b.size())) {
        throw std::invalid_argument("PartitionConstraint: capacity of block " +
                                    std::to_string(i) + " outside [1, |block|]");
      }
      std::sort(b.begin(), b.end());
      for (int e : b) {
        if (e < 0 || e >= static_cast<int>(n)) {
          throw std::invalid_argument("PartitionConstraint: blocks must cover a dense ground set");
        }
        if (element_block_[e] != -1) {
          throw std::invalid_argument("PartitionConstraint: blocks must be disjoint");
        }
        element_block_[e] = static_cast<int>(i);
      }
    }
    // Disjoint + in-range + total size == n implies exact cover.
  }

  /// Convenience for choose-at-most-one-per-block lattices (the word
  /// substitution encoding).
  static PartitionConstraint unit(std::vector<std::vector<int>> blocks) {
    std::vector<int> caps(blocks.size(), 1);
    return PartitionConstraint(std::move(blocks), std::move(caps));
  }

  int ground_size() const { return static_cast<int>(element_block_.size()); }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int i) const { return blocks_.at(i); }
  int capacity(int i) const { return capacities_.at(i); }

  int block_of(int element) const {
    if (element < 0 || element >= ground_size()) {
      throw std::domain_error("PartitionConstraint: element id out of range");
    }
    return element_block_[element];
  }

  /// d = sum of capacities.
  int total_capacity() const {
    return std::accumulate(capacities_.begin(), capacities_.end(), 0);
  }

  /// d-bar = max capacity (0 for the degenerate empty ground set).
  int max_capacity() const {
    if (capacities_.empty()) return 0;
    return *std::max_element(capacities_.begin(), capacities_.end());
  }

  bool is_feasible(const Subset& s) const {
    std::vector<int> used(blocks_.size(), 0);
    for (int e : s) {
      if (e < 0 || e >= ground_size()) return false;  // outside the ground set
      const int b = element_block_[e];
      if (++used[b] > capacities_[b]) return false;
    }
    return true;
  }

  Subset complement(const Subset& s) const {
    std::vector<int> out;
    out.reserve(element_block_.size() - s.size());
    auto it = s.begin();
    for (int e = 0; e < ground_size(); ++e) {
      if (it != s.end() && *it == e) {
        ++it;
      } else {
        out.push_back(e);
      }
    }
    return Subset(std::move(out));
  }

  /// Number of feasible subsets: prod_i sum_{j<=d_i} C(|B_i|, j). Returned as
  /// a double so oversized lattices report their required enumeration count
  /// instead of overflowing.
  double feasible_count() const {
    double total = 1.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      double block_choices = 0.0;
      double binom = 1.0;  // C(|B_i|, 0)
      const double bs = static_cast<double>(blocks_[i].size());
      for (int j = 0; j <= capacities_[i]; ++j) {
        block_choices += binom;
        binom = binom * (bs - j) / (j + 1);
      }
      total *= block_choices;
    }
    return total;
  }

 private:
  std::vector<std::vector<int>> blocks_;
  std::vector<int> capacities_;
  std::vector<int> element_block_;
};

}  // namespace setmax
