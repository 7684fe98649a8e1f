#pragma once

#include <cstdint>
#include <vector>

#include "lsf/random.hpp"

namespace lsf {

// Fenwick tree over non-negative integer weights. Draws index i with
// probability weight(i) / total(); updates and draws are O(log n).
class WeightedSampler {
 public:
  std::size_t size() const noexcept { return weights_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t weight(std::size_t i) const { return weights_.at(i); }

  void push_back(std::uint64_t w) {
    weights_.push_back(w);
    const std::size_t i = weights_.size();  // 1-based slot
    const std::size_t low = i & (~i + 1);
    tree_.push_back(w + prefix(i - 1) - prefix(i - low));
    total_ += w;
  }

  void set(std::size_t i, std::uint64_t w) {
    const std::uint64_t old = weights_.at(i);
    weights_[i] = w;
    total_ = total_ - old + w;
    for (std::size_t j = i + 1; j <= tree_.size(); j += j & (~j + 1)) {
      tree_[j - 1] = tree_[j - 1] - old + w;
    }
  }

  // Index whose cumulative weight interval [W_{i-1}, W_i) contains pos;
  // pos < total().
  std::size_t locate(std::uint64_t pos) const {
    std::size_t idx = 0;
    std::size_t step = 1;
    while (step * 2 <= tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      const std::size_t next = idx + step;
      if (next <= tree_.size() && tree_[next - 1] <= pos) {
        idx = next;
        pos -= tree_[next - 1];
      }
    }
    return idx;
  }

  std::size_t sample(Rng& rng) const { return locate(rng.uniform_index(total_)); }

 private:
  std::uint64_t prefix(std::size_t count) const {
    std::uint64_t s = 0;
    for (std::size_t j = count; j > 0; j -= j & (~j + 1)) s += tree_[j - 1];
    return s;
  }

  std::vector<std::uint64_t> weights_;
  std::vector<std::uint64_t> tree_;
  std::uint64_t total_ = 0;
};

}  // namespace lsf
