#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mrc::cli {

/// Fully resolved settings of one CLI run. Every field has a config-file key of
/// the same name as its long flag (dashes become underscores).
struct CliConfig {
  std::string command;
  std::string input;
  std::string columns;
  std::string anchor;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 20240101;
  int verbosity = 0;
  std::size_t threads = 0;

  std::size_t max_evals = 2000;
  double initial_step = 0.5;
  double simplex_tol = 1e-6;
  double bound = 100.0;
  std::string starts;  // "b1,b2;b1,b2"
  double smoothed_bandwidth = 0.0;
  bool line_polish = true;

  std::optional<std::size_t> resamples;
  double ci_level = 0.95;
  std::string ci_method = "normal";
  std::string resample_starts = "warm";
  std::string ratio;  // "num/den", names of covariates or the anchor

  std::string preset = "table1";
  std::string scheme = "4";
  std::string error = "normal";
  std::size_t n = 200;
  std::size_t replications = 100;
  std::string estimators;
  double custom_lower = -1.5;
  double custom_upper = 2.5;
  bool ipw_intercept = true;
  std::string emit_data;
  bool efficiency = false;
  bool timing = false;
};

/// Sets one field from its key and textual value. Throws mrc::InvalidArgument for
/// unknown keys or malformed values.
void apply_setting(CliConfig& config, const std::string& key, const std::string& value);

/// Reads "key = value" lines ('#' comments) and applies them in order.
void apply_config_file(CliConfig& config, const std::string& path);

/// JSON object echoing the effective configuration.
std::string config_json(const CliConfig& config);

int cmd_fit(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_infer(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (without the program name) and dispatches. Results go to --out
/// when given, otherwise to `out`; diagnostics go to `err`.
/// Exit codes: 0 success, 1 computation error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrc::cli
