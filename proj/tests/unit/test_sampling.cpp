#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrc/error.hpp"
#include "mrc/sampling.hpp"

using namespace mrc;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

std::vector<double> column(const Dataset& d, Eigen::Index k) {
  return {d.x().col(k).data(), d.x().col(k).data() + d.n()};
}

// Composite Simpson rule on [a, b].
template <typename F>
double simpson(F f, double a, double b, int intervals = 20000) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

std::vector<double> error_draws(ErrorDist e, std::size_t n, std::uint64_t seed) {
  Rng rng = substream(seed, 0);
  std::vector<double> out(n);
  for (double& v : out) v = e.draw(rng);
  return out;
}

PopulationModel table1_model(ErrorKind kind = ErrorKind::normal) {
  PopulationModel m;
  m.beta0 = {1.0, -1.0};
  m.error = {kind, 1.0};
  m.covariates = {CovariateKind::table1};
  return m;
}

}  // namespace

TEST_CASE("table1 covariate moments") {
  const auto d = draw_population(table1_model(), 100000, 1);
  const auto x1 = column(d, 0), x2 = column(d, 1);
  CHECK(std::abs(mean(x1) - 1.0) < 0.02);
  CHECK(std::abs(mean(x2) + 0.5) < 0.02);
  const double m1 = mean(x1), m2 = mean(x2);
  double cov = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) cov += (x1[i] - m1) * (x2[i] - m2);
  cov /= x1.size() - 1;
  CHECK(std::abs(cov - 0.2) < 0.02);
  CHECK(std::abs(variance(x1) - 1.0) < 0.02);
  CHECK(std::abs(variance(x2) - 1.0) < 0.02);
  CHECK(std::abs(mean(d.z())) < 0.02);
}

TEST_CASE("degenerate model returns y = z") {
  PopulationModel m;
  m.beta0 = {0.0};
  m.error = {ErrorKind::normal, 0.0};
  m.covariates = {CovariateKind::scalar_normal};
  const auto d = draw_population(m, 50, 3);
  CHECK(d.y() == d.z());
}

TEST_CASE("transform is applied to the linear index") {
  PopulationModel m = table1_model();
  const auto plain = draw_population(m, 30, 4);
  m.transform = [](double v) { return std::exp(v); };
  const auto t = draw_population(m, 30, 4);
  for (std::size_t i = 0; i < 30; ++i) CHECK(t.y()[i] == doctest::Approx(std::exp(plain.y()[i])));
}

TEST_CASE("extreme-value errors match the quadrature mean of the minimum-type law") {
  // Density of log(E), E ~ Exp(1).
  const auto density = [](double t) { return std::exp(t - std::exp(t)); };
  CHECK(simpson(density, -40.0, 5.0) == doctest::Approx(1.0).epsilon(1e-9));
  const double quad_mean = simpson([&](double t) { return t * density(t); }, -40.0, 5.0);
  CHECK(quad_mean == doctest::Approx(-0.5772156649).epsilon(1e-6));
  const auto e = error_draws({ErrorKind::extreme_value, 1.0}, 100000, 2);
  CHECK(std::abs(mean(e) - quad_mean) < 0.02);
}

TEST_CASE("error law moments") {
  const double pi = 3.14159265358979323846;
  struct Case {
    ErrorKind kind;
    double mean, var;
  } cases[] = {
      {ErrorKind::double_exponential, 0.0, 2.0},
      {ErrorKind::normal, 0.0, 1.0},
      {ErrorKind::extreme_value, -0.5772156649, pi * pi / 6.0},
      {ErrorKind::logistic, 0.0, pi * pi / 3.0},
      // 0.5 N(0,1) + 0.5 Bernoulli(0.5): mean 0.25, E[e^2] = 0.75.
      {ErrorKind::normal_bernoulli_mixture, 0.25, 0.6875},
  };
  for (const auto& c : cases) {
    const auto e = error_draws({c.kind, 1.0}, 200000, 10 + static_cast<int>(c.kind));
    CAPTURE(static_cast<int>(c.kind));
    CHECK(std::abs(mean(e) - c.mean) < 0.02);
    CHECK(std::abs(variance(e) - c.var) < 0.05 * c.var);
  }
  const auto scaled = error_draws({ErrorKind::normal, 0.01}, 50000, 3);
  CHECK(std::abs(std::sqrt(variance(scaled)) - 0.01) < 0.0005);
}

TEST_CASE("error names round trip") {
  for (const char* name : {"dexp", "normal", "ev", "logistic", "mixture"}) CHECK(ErrorDist::parse(name).name() == name);
  CHECK_THROWS_AS(ErrorDist::parse("cauchy"), InvalidArgument);
}

TEST_CASE("indicator schemes keep only their region") {
  const auto model = table1_model(ErrorKind::double_exponential);
  const auto s1 = draw_biased_sample(model, SamplingScheme::table1(1), 500, 1);
  for (double y : s1.data.y()) CHECK((y < -2.0 || y > 4.0));
  const auto s2 = draw_biased_sample(model, SamplingScheme::table1(2), 500, 1);
  for (double y : s2.data.y()) CHECK(y > 2.5);
  const auto s5 = draw_biased_sample(model, SamplingScheme::table1(5), 200, 1);
  for (double y : s5.data.y()) CHECK((y > 3.8 && y < 4.2));
  CHECK(s5.acceptance_rate < s2.acceptance_rate);
  CHECK(s5.data.n() == 200);
}

TEST_CASE("prospective scheme reproduces draw_population") {
  const auto model = table1_model();
  const auto pop = draw_population(model, 300, 42);
  const auto s4 = draw_biased_sample(model, SamplingScheme::table1(4), 300, 42);
  CHECK(s4.data.y() == pop.y());
  CHECK(s4.data.z() == pop.z());
  CHECK(s4.data.x() == pop.x());
  CHECK(s4.acceptance_rate == 1.0);
}

TEST_CASE("seed determinism") {
  const auto model = table1_model(ErrorKind::logistic);
  const auto a = draw_biased_sample(model, SamplingScheme::table1(3), 200, 9);
  const auto b = draw_biased_sample(model, SamplingScheme::table1(3), 200, 9);
  const auto c = draw_biased_sample(model, SamplingScheme::table1(3), 200, 10);
  CHECK(a.data.y() == b.data.y());
  CHECK(a.data.x() == b.data.x());
  CHECK(a.data.y() != c.data.y());
}

TEST_CASE("scheme 3 accepted responses follow f_Y(t) Phi(t - 2)") {
  // Y = Z + X1 - X2 + eps ~ N(1.5, 3.6) under the table1 law with normal errors.
  const double mu = 1.5, sd = std::sqrt(3.6);
  const auto target = [&](double t) {
    const double u = (t - mu) / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * 3.14159265358979323846)) * normal_cdf(t - 2.0);
  };
  const double lo = -12.0, hi = 16.0;
  const double total = simpson(target, lo, hi);
  const std::vector<double> edges = {lo, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, hi};

  const std::size_t n = 40000;
  const auto s = draw_biased_sample(table1_model(), SamplingScheme::table1(3), n, 17);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double p = simpson(target, edges[b], edges[b + 1], 2000) / total;
    const auto count = std::count_if(s.data.y().begin(), s.data.y().end(),
                                     [&](double y) { return y >= edges[b] && y < edges[b + 1]; });
    const double expected = n * p;
    CAPTURE(b);
    CHECK(std::abs(count - expected) <= 3.0 * std::sqrt(expected * (1.0 - p)));
  }
}

TEST_CASE("scheme 2 preserves the conditional law of X given Y") {
  const auto model = table1_model();
  const auto biased = draw_biased_sample(model, SamplingScheme::table1(2), 20000, 5);
  const auto pop = draw_population(model, 400000, 6);
  std::vector<double> ys = biased.data.y();
  std::sort(ys.begin(), ys.end());
  const std::vector<double> cuts = {2.5, ys[ys.size() / 4], ys[ys.size() / 2], ys[3 * ys.size() / 4], INFINITY};
  for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
    auto collect = [&](const Dataset& d) {
      std::vector<double> v;
      for (std::size_t i = 0; i < d.n(); ++i)
        if (d.y()[i] > cuts[b] && d.y()[i] <= cuts[b + 1]) v.push_back(d.x()(static_cast<Eigen::Index>(i), 0));
      return v;
    };
    const auto in_sample = collect(biased.data);
    const auto in_pop = collect(pop);
    const double se = std::sqrt(variance(in_sample) / in_sample.size() + variance(in_pop) / in_pop.size());
    CAPTURE(b);
    CHECK(std::abs(mean(in_sample) - mean(in_pop)) <= 3.0 * se);
  }
}

TEST_CASE("infeasible scheme is reported") {
  const auto never = SamplingScheme::custom("never", [](double) { return 0.0; });
  CHECK_THROWS_AS(draw_biased_sample(table1_model(), never, 10, 1), SchemeInfeasible);
  CHECK_THROWS_AS(SamplingScheme::table1(6), InvalidArgument);
}

TEST_CASE("custom and outside schemes") {
  const auto out = SamplingScheme::outside(-1.5, 2.5);
  CHECK(out.acceptance(-2.0) == 1.0);
  CHECK(out.acceptance(0.0) == 0.0);
  CHECK(out.acceptance(3.0) == 1.0);
  CHECK(out.is_indicator());
  const auto half = SamplingScheme::custom("half", [](double) { return 0.5; });
  const auto s = draw_biased_sample(table1_model(), half, 2000, 3);
  CHECK(std::abs(s.acceptance_rate - 0.5) < 0.05);
}

TEST_CASE("piecewise covariate density is renormalized") {
  CHECK(piecewise_x_mass() == doctest::Approx(1.009));
  const double integral = piecewise_x_density(0.0) * 0.1 + 2.0 * piecewise_x_density(50.0) * 100.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(piecewise_x_density(1.0) == 0.0);

  PopulationModel m;
  m.beta0 = {1.0};
  m.covariates = {CovariateKind::piecewise_x};
  const auto d = draw_population(m, 200000, 8);
  std::size_t tails = 0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    const double x = d.x()(static_cast<Eigen::Index>(i), 0);
    const double a = std::abs(x);
    REQUIRE(((a <= 0.05) || (a >= 5.0 && a <= 105.0)));
    tails += a >= 5.0;
  }
  const double p = 0.01 / 1.009;
  CHECK(std::abs(static_cast<double>(tails) - d.n() * p) <= 4.0 * std::sqrt(d.n() * p));
}
