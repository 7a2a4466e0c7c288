#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "mrc/dataset.hpp"
#include "mrc/rng.hpp"

namespace mrc {

enum class ErrorKind {
  double_exponential,  // Laplace(0, 1)
  normal,
  extreme_value,  // minimum-type Gumbel: log of a unit exponential
  logistic,
  normal_bernoulli_mixture,  // N(0,1) or Bernoulli(0.5), each with probability 0.5
};

/// Error law of the linear model, multiplied by `scale` (0 gives a noiseless model).
struct ErrorDist {
  ErrorKind kind = ErrorKind::normal;
  double scale = 1.0;

  double draw(Rng& rng) const;
  std::string name() const;
  /// Accepts dexp, normal, ev, logistic, mixture.
  static ErrorDist parse(const std::string& name);
};

enum class CovariateKind {
  table1,         // Z ~ N(0,1); (X1, X2) normal, mean (1, -0.5), unit variances, covariance 0.2
  scalar_normal,  // Z, X ~ N(0,1)
  piecewise_x,    // Z ~ N(0,1); X from the heavy-tailed piecewise-uniform density
};

struct CovariateLaw {
  CovariateKind kind = CovariateKind::table1;

  std::size_t dim() const noexcept { return kind == CovariateKind::table1 ? 2 : 1; }
  /// Draws the anchor into `z` and the free covariates into `x` (length dim()).
  void draw(Rng& rng, double& z, double* x) const;
  std::string name() const;
};

/// Total mass of the printed piecewise density before renormalization (1.009).
double piecewise_x_mass();
/// Renormalized piecewise density.
double piecewise_x_density(double x);

struct PopulationModel {
  Beta beta0 = {1.0, -1.0};
  ErrorDist error;
  CovariateLaw covariates;
  /// Strictly increasing map applied to z + beta0'x + eps; identity when empty.
  std::function<double(double)> transform;
};

/// Response-biased sampling design: a unit with response y is kept with
/// probability acceptance(y). The acceptance function sees y only.
class SamplingScheme {
 public:
  using Acceptance = std::function<double(double)>;

  /// Schemes 1-5 of the simulation design.
  static SamplingScheme table1(int scheme);
  /// Indicator scheme: accept iff y < lower or y > upper.
  static SamplingScheme outside(double lower, double upper);
  /// Any probability function of y; `indicator` marks 0/1-valued functions.
  static SamplingScheme custom(std::string name, Acceptance acceptance, bool indicator = false);

  double acceptance(double y) const { return acceptance_(y); }
  bool is_indicator() const noexcept { return indicator_; }
  const std::string& name() const noexcept { return name_; }

 private:
  SamplingScheme(std::string name, Acceptance acceptance, bool indicator)
      : name_(std::move(name)), acceptance_(std::move(acceptance)), indicator_(indicator) {}

  std::string name_;
  Acceptance acceptance_;
  bool indicator_ = false;
};

/// i.i.d. draws from the population model.
Dataset draw_population(const PopulationModel& model, std::size_t n, std::uint64_t seed);

struct BiasedSample {
  Dataset data;
  std::size_t drawn = 0;
  double acceptance_rate = 0.0;
};

/// Rejection sampling until n units are accepted. Units are generated exactly as
/// in draw_population, so an always-accepting scheme reproduces it row for row.
/// Throws SchemeInfeasible when the acceptance rate stays below 1e-6.
BiasedSample draw_biased_sample(const PopulationModel& model, const SamplingScheme& scheme, std::size_t n,
                                std::uint64_t seed);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace mrc
