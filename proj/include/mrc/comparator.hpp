#pragma once

#include <string>
#include <vector>

#include "mrc/dataset.hpp"
#include "mrc/sampling.hpp"

namespace mrc {

/// Horvitz-Thompson weighted least squares fit of y on (1, z, x).
struct IpwFit {
  /// (intercept, z, x_1..x_d) with an intercept; (z, x_1..x_d) without.
  std::vector<double> coef;
  std::vector<double> weights_used;  // 1 / pi(y_i)
  bool intercept = true;
  std::vector<std::string> warnings;

  /// The x_1..x_d coefficients.
  std::vector<double> free_coef() const;
};

/// Solves the normal equations with row weights 1/pi(y_i). Throws InvalidWeight
/// if some pi(y_i) is zero and RankDeficient if the weighted Gram matrix is singular.
IpwFit ipw_least_squares(const Dataset& data, const SamplingScheme& scheme, bool intercept = true);

}  // namespace mrc
