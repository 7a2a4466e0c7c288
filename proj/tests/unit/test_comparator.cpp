#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "mrc/comparator.hpp"
#include "mrc/error.hpp"
#include "mrc/sampling.hpp"
#include "test_support.hpp"

using namespace mrc;

namespace {

// Unweighted least squares through a QR factorization, independent of the
// normal-equation solve under test.
Eigen::VectorXd ols_qr(const Dataset& d) {
  const auto n = static_cast<Eigen::Index>(d.n());
  Eigen::MatrixXd design(n, 2 + d.x().cols());
  design.col(0).setOnes();
  design.col(1) = Eigen::Map<const Eigen::VectorXd>(d.z().data(), n);
  design.rightCols(d.x().cols()) = d.x();
  return design.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXd>(d.y().data(), n));
}

PopulationModel table1_model() {
  PopulationModel m;
  m.covariates = {CovariateKind::table1};
  return m;
}

}  // namespace

TEST_CASE("prospective IPW equals ordinary least squares") {
  const auto data = draw_population(table1_model(), 300, 3);
  const auto fit = ipw_least_squares(data, SamplingScheme::table1(4));
  const auto ols = ols_qr(data);
  REQUIRE(fit.coef.size() == 4);
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(fit.coef[static_cast<std::size_t>(k)] - ols(k)) < 1e-10);
  for (double w : fit.weights_used) CHECK(w == 1.0);
  CHECK(fit.free_coef().size() == 2);
}

TEST_CASE("indicator schemes reduce to OLS on the biased sample") {
  const auto s = draw_biased_sample(table1_model(), SamplingScheme::table1(2), 200, 4);
  const auto fit = ipw_least_squares(s.data, SamplingScheme::table1(2));
  const auto ols = ols_qr(s.data);
  for (double w : fit.weights_used) CHECK(w == 1.0);
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(fit.coef[static_cast<std::size_t>(k)] - ols(k)) < 1e-10);
}

TEST_CASE("noiseless data is interpolated under every positive scheme") {
  PopulationModel m = table1_model();
  m.error = {ErrorKind::normal, 0.0};
  for (int scheme : {1, 2, 3, 4, 5}) {
    const auto s = draw_biased_sample(m, SamplingScheme::table1(scheme), 60, 10 + scheme);
    const auto fit = ipw_least_squares(s.data, SamplingScheme::table1(scheme));
    CAPTURE(scheme);
    CHECK(std::abs(fit.coef[0]) < 1e-8);
    CHECK(std::abs(fit.coef[1] - 1.0) < 1e-8);
    CHECK(std::abs(fit.coef[2] - 1.0) < 1e-8);
    CHECK(std::abs(fit.coef[3] + 1.0) < 1e-8);
    double resid = 0.0;
    for (std::size_t i = 0; i < s.data.n(); ++i) {
      const double pred = fit.coef[0] + fit.coef[1] * s.data.z()[i] +
                          fit.coef[2] * s.data.x()(static_cast<Eigen::Index>(i), 0) +
                          fit.coef[3] * s.data.x()(static_cast<Eigen::Index>(i), 1);
      resid += fit.weights_used[i] * (s.data.y()[i] - pred) * (s.data.y()[i] - pred);
    }
    CHECK(std::sqrt(resid) < 1e-8);
  }
}

TEST_CASE("scheme 3 weights are inverse normal probabilities") {
  const auto s = draw_biased_sample(table1_model(), SamplingScheme::table1(3), 100, 5);
  const auto fit = ipw_least_squares(s.data, SamplingScheme::table1(3));
  for (std::size_t i = 0; i < s.data.n(); ++i)
    CHECK(fit.weights_used[i] == doctest::Approx(1.0 / normal_cdf(s.data.y()[i] - 2.0)));
}

TEST_CASE("without intercept") {
  PopulationModel m = table1_model();
  m.error = {ErrorKind::normal, 0.0};
  const auto d = draw_population(m, 40, 2);
  const auto fit = ipw_least_squares(d, SamplingScheme::table1(4), false);
  REQUIRE(fit.coef.size() == 3);
  CHECK(std::abs(fit.coef[0] - 1.0) < 1e-8);
  CHECK(fit.free_coef().size() == 2);
}

TEST_CASE("zero sampling probability and singular designs are errors") {
  const auto d = draw_population(table1_model(), 50, 1);
  CHECK_THROWS_AS(ipw_least_squares(d, SamplingScheme::table1(2)), InvalidWeight);
  const auto flat = mrc::test::make_dataset({1, 2, 3, 4}, {1, 1, 1, 1}, {{0}, {0}, {0}, {0}});
  CHECK_THROWS_AS(ipw_least_squares(flat, SamplingScheme::table1(4)), RankDeficient);
}
