#include "mrc/harness.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mrc/comparator.hpp"
#include "mrc/error.hpp"
#include "mrc/parallel.hpp"

namespace mrc {

void ScenarioSpec::validate() const {
  if (n < 2) throw InvalidArgument("harness", "n must be at least 2");
  if (replications < 2) throw InvalidArgument("harness", "replications must be at least 2");
  if (!run_mrc && !run_ipw) throw InvalidArgument("harness", "no estimator selected");
  if (model.beta0.size() != model.covariates.dim())
    throw InvalidArgument("harness", "beta0 dimension does not match the covariate law");
  optimizer.validate(model.beta0.size());
}

ScenarioSpec table1_scenario(int scheme, const std::string& error) {
  ScenarioSpec spec;
  spec.scheme = SamplingScheme::table1(scheme);
  spec.model.beta0 = {1.0, -1.0};
  spec.model.error = ErrorDist::parse(error);
  spec.model.covariates = {CovariateKind::table1};
  spec.run_ipw = true;
  spec.name = "table1-scheme" + std::to_string(scheme) + "-" + error;
  return spec;
}

ScenarioSpec mixture_scenario() {
  ScenarioSpec spec;
  spec.name = "mixture";
  spec.scheme = SamplingScheme::outside(-1.5, 2.5);
  spec.model.beta0 = {1.0};
  spec.model.error = {ErrorKind::normal_bernoulli_mixture, 1.0};
  spec.model.covariates = {CovariateKind::scalar_normal};
  return spec;
}

BiasedSample replication_sample(const ScenarioSpec& spec, std::size_t index) {
  const std::uint64_t rep_seed = substream_seed(spec.seed, index);
  return draw_biased_sample(spec.model, spec.scheme, spec.n, substream_seed(rep_seed, 0));
}

ReplicationOutcome run_replication(const ScenarioSpec& spec, std::size_t index) {
  const std::uint64_t rep_seed = substream_seed(spec.seed, index);
  const auto sample = replication_sample(spec, index);
  ReplicationOutcome out;
  out.acceptance_rate = sample.acceptance_rate;
  const ModelSpec model = ModelSpec::with_dim(sample.data.d());
  if (spec.run_mrc) {
    try {
      const FitResult fit = mrc_fit(sample.data, model, spec.optimizer);
      out.mrc = fit.beta_hat;
      if (spec.resamples > 0) {
        ResampleConfig rcfg;
        rcfg.replicates = spec.resamples;
        rcfg.seed = substream_seed(rep_seed, 1);
        rcfg.ci_level = spec.ci_level;
        rcfg.ci_method = spec.ci_method;
        rcfg.starts = spec.resample_starts;
        rcfg.threads = 1;
        const auto summary = resample_fit(sample.data, model, fit, rcfg, spec.optimizer);
        out.mrc_se = summary.se;
        out.mrc_ci = summary.ci;
      }
    } catch (const OptimizerFailure& e) {
      out.mrc.reset();
      out.mrc_error = e.what();
    } catch (const InferenceUnreliable& e) {
      out.mrc.reset();
      out.mrc_error = e.what();
    }
  }
  if (spec.run_ipw) {
    try {
      out.ipw = ipw_least_squares(sample.data, spec.scheme, spec.ipw_intercept).free_coef();
    } catch (const Error& e) {
      out.ipw_error = e.what();
    }
  }
  return out;
}

namespace {

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SimulationReport aggregate(const ScenarioSpec& spec, const std::vector<ReplicationOutcome>& outcomes) {
  SimulationReport report;
  report.scenario = spec.name;
  report.replications = outcomes.size();
  const std::size_t d = spec.model.beta0.size();
  std::vector<double> rates;
  for (const auto& o : outcomes) {
    rates.push_back(o.acceptance_rate);
    if (spec.run_mrc && !o.mrc) ++report.failed_mrc;
    if (spec.run_ipw && !o.ipw) ++report.failed_ipw;
  }
  report.mean_acceptance_rate = mean_of(rates);
  for (const auto& [failed, label] : {std::pair{report.failed_mrc, "mrc"}, std::pair{report.failed_ipw, "ipw"}}) {
    if (failed * 20 > outcomes.size())
      throw ScenarioFailure(std::string(label) + " failed in " + std::to_string(failed) + " of " +
                            std::to_string(outcomes.size()) + " replications");
    if (failed > 0)
      report.warnings.push_back(std::string(label) + " failed in " + std::to_string(failed) +
                                " replication(s); excluded from its metrics");
  }

  auto add_rows = [&](const std::string& label, auto pick, bool with_inference) {
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<double> est, ses;
      std::size_t covered = 0;
      for (const auto& o : outcomes) {
        const std::optional<Beta>& b = pick(o);
        if (!b) continue;
        est.push_back((*b)[k]);
        if (with_inference && o.mrc_se) {
          ses.push_back((*o.mrc_se)[k]);
          if ((*o.mrc_ci)[k].covers(spec.model.beta0[k])) ++covered;
        }
      }
      CoefficientMetrics m;
      m.estimator = label;
      m.coefficient = "beta" + std::to_string(k + 1);
      m.truth = spec.model.beta0[k];
      m.mean = mean_of(est);
      m.bias = m.mean - m.truth;
      m.se = sample_sd(est);
      m.used = est.size();
      if (with_inference && !ses.empty()) {
        m.see = mean_of(ses);
        m.cp = static_cast<double>(covered) / static_cast<double>(ses.size());
      }
      report.rows.push_back(std::move(m));
    }
  };
  if (spec.run_mrc) add_rows("mrc", [](const ReplicationOutcome& o) -> const std::optional<Beta>& { return o.mrc; }, true);
  if (spec.run_ipw) add_rows("ipw", [](const ReplicationOutcome& o) -> const std::optional<Beta>& { return o.ipw; }, false);
  return report;
}

SimulationReport run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const auto started = std::chrono::steady_clock::now();
  std::vector<ReplicationOutcome> outcomes(spec.replications);
  parallel_for(spec.replications, spec.threads,
               [&](std::size_t r) { outcomes[r] = run_replication(spec, r); });
  SimulationReport report = aggregate(spec, outcomes);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

EfficiencyResult run_efficiency_study(const EfficiencyConfig& config) {
  if (config.replications < 2) throw InvalidArgument("harness", "replications must be at least 2");
  PopulationModel model;
  model.beta0 = {1.0};
  model.error = {ErrorKind::normal, config.noise_sd};
  model.covariates = {CovariateKind::piecewise_x};
  const SamplingScheme biased = SamplingScheme::outside(-config.cutoff, config.cutoff);
  const SamplingScheme prospective = SamplingScheme::table1(4);
  const ModelSpec spec = ModelSpec::with_dim(1);

  EfficiencyResult result;
  result.biased.resize(config.replications);
  result.prospective.resize(config.replications);
  parallel_for(2 * config.replications, config.threads, [&](std::size_t job) {
    const std::size_t r = job / 2;
    const bool is_biased = job % 2 == 0;
    const std::uint64_t seed = substream_seed(substream_seed(config.seed, r), is_biased ? 0 : 1);
    const auto sample = draw_biased_sample(model, is_biased ? biased : prospective, config.n, seed);
    const double b = mrc_fit(sample.data, spec, config.optimizer).beta_hat[0];
    (is_biased ? result.biased : result.prospective)[r] = b;
  });
  result.mean_biased = mean_of(result.biased);
  result.sd_biased = sample_sd(result.biased);
  result.mean_prospective = mean_of(result.prospective);
  result.sd_prospective = sample_sd(result.prospective);
  const double vb = result.sd_biased * result.sd_biased;
  const double vp = result.sd_prospective * result.sd_prospective;
  result.relative_efficiency = vb > 0.0 ? vp / vb : (vp > 0.0 ? INFINITY : NAN);
  return result;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string report_json(const SimulationReport& report, const std::string& config_json, bool include_timing) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = nlohmann::ordered_json::parse(config_json);
  j["scenario"] = report.scenario;
  j["replications"] = report.replications;
  j["failed"] = {{"mrc", report.failed_mrc}, {"ipw", report.failed_ipw}};
  j["mean_acceptance_rate"] = report.mean_acceptance_rate;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& m : report.rows) {
    rows.push_back({{"estimator", m.estimator},
                    {"coefficient", m.coefficient},
                    {"truth", m.truth},
                    {"mean", m.mean},
                    {"bias", m.bias},
                    {"se", m.se},
                    {"see", optional_number(m.see)},
                    {"cp", optional_number(m.cp)},
                    {"used", m.used}});
  }
  j["metrics"] = rows;
  j["warnings"] = report.warnings;
  if (include_timing) j["runtime_seconds"] = report.runtime_seconds;
  return j.dump(2) + "\n";
}

std::string report_csv(const SimulationReport& report, const std::string& config_json, bool include_timing) {
  auto num = [](double v) { return nlohmann::json(v).dump(); };
  std::ostringstream out;
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "# config=" << nlohmann::json::parse(config_json).dump() << "\n";
  out << "# replications=" << report.replications << ",failed_mrc=" << report.failed_mrc
      << ",failed_ipw=" << report.failed_ipw << "\n";
  for (const auto& w : report.warnings) out << "# warning=" << w << "\n";
  if (include_timing) out << "# runtime_seconds=" << num(report.runtime_seconds) << "\n";
  out << "scenario,estimator,coefficient,truth,mean,bias,se,see,cp,used\n";
  for (const auto& m : report.rows) {
    out << report.scenario << ',' << m.estimator << ',' << m.coefficient << ',' << num(m.truth) << ','
        << num(m.mean) << ',' << num(m.bias) << ',' << num(m.se) << ',' << (m.see ? num(*m.see) : "") << ','
        << (m.cp ? num(*m.cp) : "") << ',' << m.used << "\n";
  }
  return out.str();
}

}  // namespace mrc
