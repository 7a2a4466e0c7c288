#include "mrc/sampling.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "mrc/error.hpp"

namespace mrc {
namespace {

constexpr double kTailDensity = 5e-5;
constexpr double kCoreDensity = 9.99;
constexpr double kTailMass = kTailDensity * 100.0;  // each of [-105,-5] and [5,105]
constexpr double kCoreMass = kCoreDensity * 0.1;    // [-0.05, 0.05]

double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

// Uniform on (0, 1), never exactly 0.
double open_uniform(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ErrorDist::draw(Rng& rng) const {
  double e = 0.0;
  switch (kind) {
    case ErrorKind::double_exponential: {
      const double u = open_uniform(rng) - 0.5;
      e = u < 0 ? std::log1p(2.0 * u) : -std::log1p(-2.0 * u);
      break;
    }
    case ErrorKind::normal:
      e = standard_normal(rng);
      break;
    case ErrorKind::extreme_value:
      e = std::log(-std::log(open_uniform(rng)));
      break;
    case ErrorKind::logistic: {
      const double u = open_uniform(rng);
      e = std::log(u / (1.0 - u));
      break;
    }
    case ErrorKind::normal_bernoulli_mixture: {
      const bool gaussian = uniform01(rng) < 0.5;
      e = gaussian ? standard_normal(rng) : (uniform01(rng) < 0.5 ? 1.0 : 0.0);
      break;
    }
  }
  return scale * e;
}

std::string ErrorDist::name() const {
  switch (kind) {
    case ErrorKind::double_exponential: return "dexp";
    case ErrorKind::normal: return "normal";
    case ErrorKind::extreme_value: return "ev";
    case ErrorKind::logistic: return "logistic";
    case ErrorKind::normal_bernoulli_mixture: return "mixture";
  }
  return "unknown";
}

ErrorDist ErrorDist::parse(const std::string& name) {
  if (name == "dexp") return {ErrorKind::double_exponential, 1.0};
  if (name == "normal") return {ErrorKind::normal, 1.0};
  if (name == "ev") return {ErrorKind::extreme_value, 1.0};
  if (name == "logistic") return {ErrorKind::logistic, 1.0};
  if (name == "mixture") return {ErrorKind::normal_bernoulli_mixture, 1.0};
  throw InvalidArgument("sampling", "unknown error distribution '" + name + "'");
}

double piecewise_x_mass() { return 2.0 * kTailMass + kCoreMass; }

double piecewise_x_density(double x) {
  const double a = std::abs(x);
  double f = 0.0;
  if (a <= 0.05) f = kCoreDensity;
  else if (a >= 5.0 && a <= 105.0) f = kTailDensity;
  return f / piecewise_x_mass();
}

void CovariateLaw::draw(Rng& rng, double& z, double* x) const {
  z = standard_normal(rng);
  switch (kind) {
    case CovariateKind::table1: {
      const double u1 = standard_normal(rng);
      const double u2 = standard_normal(rng);
      x[0] = 1.0 + u1;
      x[1] = -0.5 + 0.2 * u1 + std::sqrt(1.0 - 0.04) * u2;
      break;
    }
    case CovariateKind::scalar_normal:
      x[0] = standard_normal(rng);
      break;
    case CovariateKind::piecewise_x: {
      const double u = uniform01(rng) * piecewise_x_mass();
      const double v = uniform01(rng);
      if (u < kTailMass) x[0] = -105.0 + 100.0 * v;
      else if (u < kTailMass + kCoreMass) x[0] = -0.05 + 0.1 * v;
      else x[0] = 5.0 + 100.0 * v;
      break;
    }
  }
}

std::string CovariateLaw::name() const {
  switch (kind) {
    case CovariateKind::table1: return "table1";
    case CovariateKind::scalar_normal: return "scalar_normal";
    case CovariateKind::piecewise_x: return "piecewise_x";
  }
  return "unknown";
}

SamplingScheme SamplingScheme::table1(int scheme) {
  switch (scheme) {
    case 1: return {"scheme1", [](double y) { return (y < -2.0 || y > 4.0) ? 1.0 : 0.0; }, true};
    case 2: return {"scheme2", [](double y) { return y > 2.5 ? 1.0 : 0.0; }, true};
    case 3: return {"scheme3", [](double y) { return normal_cdf(y - 2.0); }, false};
    case 4: return {"scheme4", [](double) { return 1.0; }, true};
    case 5: return {"scheme5", [](double y) { return (y > 3.8 && y < 4.2) ? 1.0 : 0.0; }, true};
    default: throw InvalidArgument("sampling", "scheme must be 1..5, got " + std::to_string(scheme));
  }
}

SamplingScheme SamplingScheme::outside(double lower, double upper) {
  if (!(lower <= upper)) throw InvalidArgument("sampling", "outside() needs lower <= upper");
  std::string name = "outside(" + std::to_string(lower) + "," + std::to_string(upper) + ")";
  return {std::move(name), [lower, upper](double y) { return (y < lower || y > upper) ? 1.0 : 0.0; }, true};
}

SamplingScheme SamplingScheme::custom(std::string name, Acceptance acceptance, bool indicator) {
  if (!acceptance) throw InvalidArgument("sampling", "custom scheme needs an acceptance function");
  return {std::move(name), std::move(acceptance), indicator};
}

namespace {

class UnitGenerator {
 public:
  UnitGenerator(const PopulationModel& model, std::uint64_t seed)
      : model_(model), rng_(substream(seed, 0)), x_(model.covariates.dim()) {
    if (model.beta0.size() != model.covariates.dim())
      throw InvalidArgument("sampling", "beta0 has length " + std::to_string(model.beta0.size()) +
                                            " but the covariate law has dimension " +
                                            std::to_string(model.covariates.dim()));
  }

  // Draws one unit; returns y and leaves z, x in members.
  double next() {
    model_.covariates.draw(rng_, z_, x_.data());
    double index = z_;
    for (std::size_t k = 0; k < x_.size(); ++k) index += model_.beta0[k] * x_[k];
    index += model_.error.draw(rng_);
    return model_.transform ? model_.transform(index) : index;
  }

  double z() const { return z_; }
  const std::vector<double>& x() const { return x_; }

 private:
  const PopulationModel& model_;
  Rng rng_;
  double z_ = 0.0;
  std::vector<double> x_;
};

}  // namespace

Dataset draw_population(const PopulationModel& model, std::size_t n, std::uint64_t seed) {
  return draw_biased_sample(model, SamplingScheme::table1(4), n, seed).data;
}

BiasedSample draw_biased_sample(const PopulationModel& model, const SamplingScheme& scheme, std::size_t n,
                                std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("sampling", "sample size must be at least 2");
  UnitGenerator units(model, seed);
  Rng accept_rng = substream(seed, 1);
  const std::size_t d = model.covariates.dim();
  std::vector<double> y, z;
  y.reserve(n);
  z.reserve(n);
  std::vector<double> xs;
  xs.reserve(n * d);
  constexpr std::size_t kCheckEvery = 1'000'000;
  constexpr double kMinRate = 1e-6;
  std::size_t drawn = 0;
  while (y.size() < n) {
    const double yi = units.next();
    ++drawn;
    const double p = scheme.acceptance(yi);
    if (p >= 1.0 || (p > 0.0 && uniform01(accept_rng) < p)) {
      y.push_back(yi);
      z.push_back(units.z());
      xs.insert(xs.end(), units.x().begin(), units.x().end());
    }
    if (drawn % kCheckEvery == 0 &&
        static_cast<double>(y.size()) / static_cast<double>(drawn) < kMinRate) {
      throw SchemeInfeasible("scheme " + scheme.name() + " accepted " + std::to_string(y.size()) + " of " +
                             std::to_string(drawn) + " draws");
    }
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = xs[i * d + k];
  const double rate = static_cast<double>(n) / static_cast<double>(drawn);
  return {Dataset(std::move(y), std::move(z), std::move(x)), drawn, rate};
}

}  // namespace mrc
