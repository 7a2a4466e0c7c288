#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrc/dataset.hpp"
#include "mrc/rankcorr.hpp"

namespace mrc {

struct OptimizerConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  std::size_t max_evals = 2000;  // per start
  double simplex_tol = 1e-6;
  double initial_step = 0.5;
  /// Search is confined to the box [-bound, bound]^d.
  double bound = 100.0;
  /// Explicit starting points, tried in order before the grid.
  std::vector<Beta> starts;
  /// Append default_start_grid() to the explicit starts.
  bool use_grid = true;
  /// Restarts from the incumbent until a restart no longer strictly improves it.
  std::size_t max_restarts = 20;
  /// After the simplex search, run exact coordinate line maximizations of the
  /// rank objective from the incumbent (skipped for the smoothed objective and
  /// when n(n-1)/2 exceeds kMaxPolishPairs).
  bool line_polish = true;
  /// When positive, mrc_fit maximizes the logistic relaxation with this bandwidth.
  double smoothed_bandwidth = 0.0;

  void validate(std::size_t dim) const;
};

inline constexpr std::size_t kMaxPolishPairs = 5'000'000;

/// {-1, 0, +1}^min(d,4) scaled by `step`, origin first, remaining coordinates 0.
std::vector<Beta> default_start_grid(std::size_t dim, double step);

struct StartDiagnostic {
  Beta start;
  Beta best;
  double value = 0.0;
  std::size_t evals = 0;
  bool converged = false;
  std::string error;  // non-empty when the start was aborted
};

struct SimplexResult {
  Beta beta;
  double value = 0.0;
  std::size_t evals = 0;
  std::size_t start_used = 0;
  bool converged = false;
  std::vector<StartDiagnostic> starts;
};

using Objective = std::function<double(std::span<const double>)>;

/// Multi-start Nelder-Mead maximization of an arbitrary (possibly discontinuous)
/// objective. Stops each start on simplex diameter or evaluation budget; never uses
/// objective differences. Ties between vertices keep the incumbent, ties between
/// starts keep the earlier start. Deterministic for a given config.
SimplexResult nelder_mead_max(const Objective& objective, std::size_t dim, const OptimizerConfig& config);

struct FitResult {
  Beta beta_hat;
  ObjectiveValue objective;
  std::size_t evals = 0;
  std::size_t start_used = 0;
  bool converged = false;
  std::vector<std::string> warnings;
  std::vector<StartDiagnostic> starts;
};

/// Maximum rank correlation estimate of the free coefficients (anchor fixed to 1).
/// Coordinate-wise exact line search on the (weighted if `weights` is non-empty)
/// objective, repeated while some coordinate strictly improves `value`. Updates
/// beta and value in place; returns the number of objective evaluations.
std::size_t polish_coordinates(const Dataset& data, Beta& beta, double& value, std::span<const double> weights,
                               const OptimizerConfig& config);

FitResult mrc_fit(const Dataset& data, const ModelSpec& spec, const OptimizerConfig& config = {});

/// Starting points mrc_fit uses for `config` in dimension `dim`.
std::vector<Beta> start_points(std::size_t dim, const OptimizerConfig& config);

}  // namespace mrc
