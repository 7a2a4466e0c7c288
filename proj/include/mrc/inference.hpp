#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mrc/dataset.hpp"
#include "mrc/optimize.hpp"
#include "mrc/rng.hpp"

namespace mrc {

enum class CiMethod { normal, percentile };

/// How each weighted maximization is started. `warm` starts from the point
/// estimate alone and falls back to the full grid only when that run fails or
/// stops on the evaluation budget; `warm_and_grid` always adds the grid.
enum class ResampleStarts { warm, warm_and_grid };

struct ResampleConfig {
  std::size_t replicates = 500;
  std::uint64_t seed = 20240101;
  double ci_level = 0.95;
  CiMethod ci_method = CiMethod::normal;
  ResampleStarts starts = ResampleStarts::warm;
  /// Worker threads for replicates; 0 uses all hardware threads. Output does not
  /// depend on this value.
  std::size_t threads = 1;

  void validate() const;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool covers(double v) const { return lower <= v && v <= upper; }
};

/// Draws i.i.d. random weights for one replicate.
using WeightSampler = std::function<std::vector<double>(std::size_t n, Rng& rng)>;

/// Standard exponential weights (mean 1, variance 1).
std::vector<double> exponential_weights(std::size_t n, Rng& rng);

struct ResampleSummary {
  std::vector<Beta> draws;  // one row per successful replicate, in replicate order
  std::vector<double> se;
  std::vector<Interval> ci;
  std::size_t replicates = 0;
  std::size_t n_failed = 0;
  double ci_level = 0.95;
  CiMethod ci_method = CiMethod::normal;
  std::vector<std::string> warnings;
};

/// Random-weighting inference: replicate k maximizes the weighted objective with
/// weights drawn from substream k of rcfg.seed, starting at beta_hat (see
/// ResampleStarts). SEs are per-coordinate SDs of the replicate maxima.
ResampleSummary resample_fit(const Dataset& data, const ModelSpec& spec, const FitResult& fit,
                             const ResampleConfig& rcfg, const OptimizerConfig& ocfg,
                             const WeightSampler& sampler = exponential_weights);

/// Denominator index that refers to the anchor coefficient (identically 1).
inline constexpr std::size_t kAnchorIndex = std::numeric_limits<std::size_t>::max();

struct RatioInference {
  double estimate = 0.0;
  double se = 0.0;
  Interval ci;
  std::size_t used = 0;
  std::size_t dropped = 0;
  std::vector<std::string> warnings;
};

/// Inference for beta_num / beta_den from the replicate draws.
RatioInference derived_ratio_ci(const ResampleSummary& summary, const FitResult& fit, std::size_t num,
                                std::size_t den, CiMethod method = CiMethod::percentile);

/// Sample SD with n - 1 denominator; 0 for fewer than two values.
double sample_sd(const std::vector<double>& v);
/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted values.
double quantile(std::vector<double> v, double p);
/// Two-sided standard normal critical value z_{1 - (1 - level)/2}.
double normal_critical(double level);

}  // namespace mrc
