#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrc/inference.hpp"
#include "mrc/optimize.hpp"
#include "mrc/sampling.hpp"

namespace mrc {

struct ScenarioSpec {
  std::string name = "scenario";
  PopulationModel model;
  SamplingScheme scheme = SamplingScheme::table1(4);
  std::size_t n = 200;
  std::size_t replications = 100;
  std::size_t resamples = 500;  // 0 skips resampling (no SEE/CP)
  bool run_mrc = true;
  bool run_ipw = false;
  bool ipw_intercept = true;
  std::uint64_t seed = 20240101;
  double ci_level = 0.95;
  CiMethod ci_method = CiMethod::normal;
  ResampleStarts resample_starts = ResampleStarts::warm;
  OptimizerConfig optimizer;
  /// Worker threads for replications; 0 uses all hardware threads.
  std::size_t threads = 0;

  void validate() const;
};

/// Named simulation-study cell: scheme 1..5 with one of the four error laws.
ScenarioSpec table1_scenario(int scheme, const std::string& error);
/// Mixture-error robustness design: beta = 1, Z, X ~ N(0,1), keep y < -1.5 or y > 2.5.
ScenarioSpec mixture_scenario();

/// What one replication produced.
struct ReplicationOutcome {
  std::optional<Beta> mrc;
  std::optional<std::vector<double>> mrc_se;
  std::optional<std::vector<Interval>> mrc_ci;
  std::optional<Beta> ipw;
  std::string mrc_error;
  std::string ipw_error;
  double acceptance_rate = 0.0;
};

struct CoefficientMetrics {
  std::string estimator;  // "mrc" or "ipw"
  std::string coefficient;
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double se = 0.0;                // SD of estimates across replications
  std::optional<double> see;      // mean resampling SE
  std::optional<double> cp;       // coverage of beta0
  std::size_t used = 0;           // replications contributing
};

struct SimulationReport {
  std::string scenario;
  std::size_t replications = 0;
  std::size_t failed_mrc = 0;
  std::size_t failed_ipw = 0;
  double mean_acceptance_rate = 0.0;
  std::vector<CoefficientMetrics> rows;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;
};

/// The biased sample replication `index` of the scenario fits.
BiasedSample replication_sample(const ScenarioSpec& spec, std::size_t index);

/// Runs one replication; `index` selects the seed substream.
ReplicationOutcome run_replication(const ScenarioSpec& spec, std::size_t index);

/// BIAS / SE / SEE / CP over successful replications. Throws ScenarioFailure if
/// more than 5% of replications failed for an estimator.
SimulationReport aggregate(const ScenarioSpec& spec, const std::vector<ReplicationOutcome>& outcomes);

/// Runs all replications (in parallel when spec.threads != 1) and aggregates.
SimulationReport run_scenario(const ScenarioSpec& spec);

struct EfficiencyConfig {
  std::size_t replications = 50;
  std::size_t n = 200;
  std::uint64_t seed = 20240101;
  double noise_sd = 0.01;  // eps ~ N(0, 1e-4)
  double cutoff = 4.5;     // biased arm keeps |y| > cutoff
  OptimizerConfig optimizer;
  std::size_t threads = 0;
};

struct EfficiencyResult {
  double mean_biased = 0.0;
  double sd_biased = 0.0;
  double mean_prospective = 0.0;
  double sd_prospective = 0.0;
  double relative_efficiency = 0.0;  // var(prospective) / var(biased)
  std::vector<double> biased;
  std::vector<double> prospective;
};

/// Heavy-tailed covariate design comparing |y|-biased and prospective sampling.
EfficiencyResult run_efficiency_study(const EfficiencyConfig& config);

/// Report serializations. `config_json` is embedded verbatim; runtime is written
/// only when include_timing is set so that reports are reproducible byte for byte.
std::string report_json(const SimulationReport& report, const std::string& config_json, bool include_timing = false);
std::string report_csv(const SimulationReport& report, const std::string& config_json, bool include_timing = false);

inline constexpr int kSchemaVersion = 1;

}  // namespace mrc
