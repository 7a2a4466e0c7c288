#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "mrc/error.hpp"
#include "mrc/harness.hpp"

using namespace mrc;

namespace {

ScenarioSpec tiny(int scheme = 4, const std::string& error = "normal") {
  ScenarioSpec spec = table1_scenario(scheme, error);
  spec.n = 60;
  spec.replications = 4;
  spec.resamples = 3;
  spec.threads = 1;
  spec.seed = 99;
  return spec;
}

}  // namespace

TEST_CASE("smoke scenario produces a structurally valid report") {
  ScenarioSpec spec = table1_scenario(4, "normal");
  spec.replications = 2;
  spec.resamples = 2;
  spec.threads = 1;
  const auto report = run_scenario(spec);
  CHECK(report.replications == 2);
  REQUIRE(report.rows.size() == 4);
  for (const auto& m : report.rows) {
    CHECK(m.se >= 0.0);
    CHECK(m.used == 2);
    if (m.estimator == "mrc") {
      REQUIRE(m.see.has_value());
      CHECK(*m.see >= 0.0);
      CHECK(*m.cp >= 0.0);
      CHECK(*m.cp <= 1.0);
    } else {
      CHECK_FALSE(m.see.has_value());
      CHECK_FALSE(m.cp.has_value());
    }
  }
  const auto j = nlohmann::json::parse(report_json(report, "{\"seed\":1}"));
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["metrics"].size() == 4);
  CHECK_FALSE(j.contains("runtime_seconds"));
  CHECK(nlohmann::json::parse(report_json(report, "{}", true)).contains("runtime_seconds"));
  const auto csv = report_csv(report, "{}");
  CHECK(csv.rfind("# schema_version=1\n", 0) == 0);
  CHECK(csv.find("scenario,estimator,coefficient,truth,mean,bias,se,see,cp,used\n") != std::string::npos);
}

TEST_CASE("metric definitions on a three-replication fixture") {
  ScenarioSpec spec = table1_scenario(4, "normal");
  spec.run_ipw = true;
  std::vector<ReplicationOutcome> outcomes(3);
  outcomes[0].mrc = Beta{1.1, -1.0};
  outcomes[1].mrc = Beta{0.8, -0.7};
  outcomes[2].mrc = Beta{1.3, -1.1};
  outcomes[0].mrc_se = std::vector<double>{0.2, 0.1};
  outcomes[1].mrc_se = std::vector<double>{0.1, 0.1};
  outcomes[2].mrc_se = std::vector<double>{0.3, 0.4};
  outcomes[0].mrc_ci = std::vector<Interval>{{0.9, 1.3}, {-1.2, -0.8}};
  outcomes[1].mrc_ci = std::vector<Interval>{{0.6, 0.95}, {-0.9, -0.5}};
  outcomes[2].mrc_ci = std::vector<Interval>{{0.7, 1.9}, {-1.9, -0.3}};
  outcomes[0].ipw = Beta{1.2, -0.9};
  outcomes[1].ipw = Beta{1.0, -1.0};
  outcomes[2].ipw = Beta{1.4, -1.3};
  const auto r = aggregate(spec, outcomes);
  REQUIRE(r.rows.size() == 4);
  const auto& b1 = r.rows[0];
  // mean(1.1, 0.8, 1.3) = 1.0667; deviations 0.0333, -0.2667, 0.2333.
  CHECK(b1.bias == doctest::Approx(1.0 / 15.0));
  CHECK(b1.se == doctest::Approx(std::sqrt((0.0333333333 * 0.0333333333 + 0.2666666667 * 0.2666666667 +
                                            0.2333333333 * 0.2333333333) / 2.0)));
  CHECK(*b1.see == doctest::Approx(0.2));
  CHECK(*b1.cp == doctest::Approx(2.0 / 3.0));
  const auto& b2 = r.rows[1];
  CHECK(b2.bias == doctest::Approx(0.0666666667));
  CHECK(*b2.see == doctest::Approx(0.2));
  CHECK(*b2.cp == doctest::Approx(2.0 / 3.0));
  const auto& ipw1 = r.rows[2];
  CHECK(ipw1.estimator == "ipw");
  CHECK(ipw1.bias == doctest::Approx(0.2));
  CHECK(ipw1.se == doctest::Approx(0.2));
}

TEST_CASE("failed replications are excluded, too many abort") {
  ScenarioSpec spec = table1_scenario(4, "normal");
  spec.run_ipw = false;
  std::vector<ReplicationOutcome> outcomes(40);
  for (std::size_t i = 0; i < outcomes.size(); ++i) outcomes[i].mrc = Beta{1.0 + 0.01 * i, -1.0};
  outcomes[3].mrc.reset();
  outcomes[3].mrc_error = "boom";
  outcomes[5].mrc.reset();
  const auto r = aggregate(spec, outcomes);
  CHECK(r.failed_mrc == 2);
  CHECK(r.rows[0].used == 38);
  CHECK_FALSE(r.warnings.empty());
  outcomes[7].mrc.reset();
  CHECK_THROWS_AS(aggregate(spec, outcomes), ScenarioFailure);
}

TEST_CASE("scenario reports are reproducible and schedule independent") {
  const ScenarioSpec serial = tiny(3, "logistic");
  ScenarioSpec parallel = serial;
  parallel.threads = 3;
  const auto a = report_json(run_scenario(serial), "{}");
  const auto b = report_json(run_scenario(serial), "{}");
  const auto c = report_json(run_scenario(parallel), "{}");
  CHECK(a == b);
  CHECK(a == c);
  ScenarioSpec other = serial;
  other.seed = 100;
  CHECK(report_json(run_scenario(other), "{}") != a);
}

TEST_CASE("presets") {
  const auto mix = mixture_scenario();
  CHECK(mix.model.beta0 == Beta{1.0});
  CHECK(mix.scheme.acceptance(0.0) == 0.0);
  CHECK(mix.scheme.acceptance(-2.0) == 1.0);
  CHECK(mix.scheme.acceptance(3.0) == 1.0);
  CHECK(mix.model.error.kind == ErrorKind::normal_bernoulli_mixture);
  const auto t = table1_scenario(1, "dexp");
  CHECK(t.n == 200);
  CHECK(t.replications == 100);
  CHECK(t.model.beta0 == Beta{1.0, -1.0});
  CHECK_THROWS_AS(table1_scenario(1, "cauchy"), InvalidArgument);
  ScenarioSpec bad = t;
  bad.replications = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("noiseless efficiency study collapses to the truth") {
  EfficiencyConfig cfg;
  cfg.replications = 4;
  cfg.n = 100;
  cfg.noise_sd = 0.0;
  cfg.threads = 1;
  const auto r = run_efficiency_study(cfg);
  for (double b : r.biased) CHECK(std::abs(b - 1.0) < 1e-3);
  for (double b : r.prospective) CHECK(std::abs(b - 1.0) < 1e-3);
  CHECK(r.sd_biased < 1e-3);
  CHECK(r.sd_prospective < 1e-3);
}
