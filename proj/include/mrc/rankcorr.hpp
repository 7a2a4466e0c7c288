#pragma once

#include <span>

#include "mrc/dataset.hpp"

namespace mrc {

/// Pair sum of the rank-correlation objective and its 1/(n^2 - n) normalization.
struct ObjectiveValue {
  double raw = 0.0;
  double normalized = 0.0;
};

// All kernels score an ordered pair (i, j) only when y_i > y_j and s_i > s_j
// strictly; tied pairs contribute nothing.

/// Reference O(n^2) double loop over ordered pairs.
ObjectiveValue evaluate_naive(const Dataset& data, std::span<const double> beta);

/// O(n log n) sweep: y groups in ascending order, Fenwick tree over dense ranks of s.
/// Returns exactly the same count as evaluate_naive.
ObjectiveValue evaluate_fast(const Dataset& data, std::span<const double> beta);

/// Randomly weighted objective sum_{i!=j} e_i e_j 1{s_i>s_j} 1{y_i>y_j}, same sweep
/// as evaluate_fast with weight sums in the tree. Throws on negative weights.
ObjectiveValue evaluate_weighted(const Dataset& data, std::span<const double> beta,
                                 std::span<const double> weights);

/// O(n^2) weighted double loop; reference for evaluate_weighted.
ObjectiveValue evaluate_weighted_naive(const Dataset& data, std::span<const double> beta,
                                       std::span<const double> weights);

/// Logistic relaxation sum_{i!=j} sigmoid((s_i - s_j)/h) 1{y_i>y_j}.
double evaluate_smoothed(const Dataset& data, std::span<const double> beta, double bandwidth);

struct LineMax {
  double t = 0.0;      // step along coordinate k
  double value = 0.0;  // objective on the segment containing t
};

/// Maximizes the objective along beta + t e_k for t in (lo, hi). Along a line the
/// objective is piecewise constant with jumps where two scores cross, so all
/// crossings are sorted and swept once: O(n^2 log n). Returns the midpoint of the
/// best open segment, the one nearest t = 0 among equals. Empty weights mean unit
/// weights. The returned value is computed by the sweep; callers should confirm
/// it with the kernel.
LineMax line_maximize(const Dataset& data, std::span<const double> beta, std::size_t k,
                      std::span<const double> weights, double lo, double hi);

}  // namespace mrc
