#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mrc {

using Beta = std::vector<double>;

/// Observations (y_i, z_i, x_i) for the transformation model H(y) = z + beta'x + eps.
///
/// `z` is the anchor covariate whose coefficient is fixed to 1; `x` holds the d
/// free covariates. The y-ordering used by the fast rank kernels is computed once
/// at construction, so a Dataset is immutable and safe to share across threads.
class Dataset {
 public:
  Dataset(std::vector<double> y, std::vector<double> z, Eigen::MatrixXd x);

  std::size_t n() const noexcept { return y_.size(); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  const std::vector<double>& y() const noexcept { return y_; }
  const std::vector<double>& z() const noexcept { return z_; }
  const Eigen::MatrixXd& x() const noexcept { return x_; }

  /// Composite scores s_i = z_i + beta'x_i.
  std::vector<double> scores(std::span<const double> beta) const;

  /// Indices sorted by ascending y (stable).
  const std::vector<std::size_t>& y_order() const noexcept { return y_order_; }
  /// Start offsets into y_order() of each run of tied y values, plus a final n.
  const std::vector<std::size_t>& y_groups() const noexcept { return y_groups_; }

  /// Returns a copy with y replaced; covariates unchanged.
  Dataset with_response(std::vector<double> y) const;

 private:
  std::vector<double> y_;
  std::vector<double> z_;
  Eigen::MatrixXd x_;
  std::vector<std::size_t> y_order_;
  std::vector<std::size_t> y_groups_;
};

/// Which covariate is the anchor and what the free covariates are called.
struct ModelSpec {
  std::string anchor = "z";
  std::vector<std::string> covariates;

  std::size_t dim() const noexcept { return covariates.size(); }

  /// Spec with generic names x1..xd.
  static ModelSpec with_dim(std::size_t d);
};

}  // namespace mrc
