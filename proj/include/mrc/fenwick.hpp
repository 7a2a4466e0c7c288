#pragma once

#include <cstddef>
#include <vector>

namespace mrc {

// Prefix sums over positions [0, size) with point updates, both O(log n).
template <typename T>
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t size) : tree_(size + 1, T{}) {}

  void add(std::size_t pos, T value) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += value;
  }

  // Sum of positions [0, end).
  T prefix(std::size_t end) const {
    T sum{};
    for (std::size_t i = end; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

 private:
  std::vector<T> tree_;
};

}  // namespace mrc
