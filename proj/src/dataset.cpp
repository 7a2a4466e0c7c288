#include "mrc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrc/error.hpp"

namespace mrc {

Dataset::Dataset(std::vector<double> y, std::vector<double> z, Eigen::MatrixXd x)
    : y_(std::move(y)), z_(std::move(z)), x_(std::move(x)) {
  const std::size_t n = y_.size();
  if (n < 2) throw InvalidArgument("dataset", "need at least 2 observations");
  if (z_.size() != n || static_cast<std::size_t>(x_.rows()) != n)
    throw InvalidArgument("dataset", "y, z and x must have the same number of rows");
  if (x_.cols() < 1) throw InvalidArgument("dataset", "need at least one free covariate");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(y_.begin(), y_.end(), finite) || !std::all_of(z_.begin(), z_.end(), finite) ||
      !x_.allFinite())
    throw InvalidArgument("dataset", "all entries must be finite");

  y_order_.resize(n);
  std::iota(y_order_.begin(), y_order_.end(), std::size_t{0});
  std::stable_sort(y_order_.begin(), y_order_.end(),
                   [this](std::size_t a, std::size_t b) { return y_[a] < y_[b]; });
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || y_[y_order_[k]] != y_[y_order_[k - 1]]) y_groups_.push_back(k);
  }
  y_groups_.push_back(n);
}

std::vector<double> Dataset::scores(std::span<const double> beta) const {
  if (beta.size() != d())
    throw InvalidArgument("rankcorr", "beta has length " + std::to_string(beta.size()) +
                                          " but the dataset has " + std::to_string(d()) +
                                          " free covariates");
  std::vector<double> s(z_);
  for (std::size_t k = 0; k < d(); ++k) {
    const double b = beta[k];
    const auto col = x_.col(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += b * col(static_cast<Eigen::Index>(i));
  }
  return s;
}

Dataset Dataset::with_response(std::vector<double> y) const { return Dataset(std::move(y), z_, x_); }

ModelSpec ModelSpec::with_dim(std::size_t d) {
  ModelSpec spec;
  for (std::size_t k = 1; k <= d; ++k) spec.covariates.push_back("x" + std::to_string(k));
  return spec;
}

}  // namespace mrc
