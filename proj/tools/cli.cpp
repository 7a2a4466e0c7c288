#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrc/comparator.hpp"
#include "mrc/datasets.hpp"
#include "mrc/error.hpp"
#include "mrc/harness.hpp"
#include "mrc/inference.hpp"
#include "mrc/optimize.hpp"

namespace mrc::cli {
namespace {

using Json = nlohmann::ordered_json;

struct OptionInfo {
  const char* key;
  const char* help;
  bool flag = false;
};

// Every setting reachable from the command line and from config files.
const std::vector<OptionInfo>& option_table() {
  static const std::vector<OptionInfo> table = {
      {"input", "input CSV file"},
      {"columns", "column roles, e.g. y=time,z=age,x=a;b,delta=status"},
      {"anchor", "anchor column (coefficient fixed to 1); overrides z= in --columns"},
      {"out", "output file (default: stdout)"},
      {"format", "output format: json or csv"},
      {"seed", "master random seed"},
      {"verbosity", "0 quiet, 1 warnings to stderr"},
      {"threads", "worker threads for replications, 0 = all cores"},
      {"max_evals", "Nelder-Mead evaluation budget per start"},
      {"initial_step", "initial simplex edge and start-grid scale"},
      {"simplex_tol", "simplex diameter stopping tolerance"},
      {"bound", "search box half-width"},
      {"starts", "extra start points, e.g. '1,-1;0.5,0'"},
      {"line_polish", "exact coordinate line search after the simplex (true/false)"},
      {"smoothed_bandwidth", "maximize the logistic-smoothed objective with this bandwidth"},
      {"resamples", "random-weighting replicates (0 disables inference)"},
      {"ci_level", "confidence level"},
      {"ci_method", "normal or percentile"},
      {"resample_starts", "warm (grid only as fallback) or warm_and_grid"},
      {"ratio", "derived ratio num/den by column name (den may be the anchor)"},
      {"preset", "simulation preset: table1 or mixture"},
      {"scheme", "sampling scheme 1..5 or custom"},
      {"error", "error law: dexp, normal, ev, logistic, mixture"},
      {"n", "sample size"},
      {"replications", "Monte Carlo replications"},
      {"estimators", "comma list of mrc, ipw"},
      {"custom_lower", "custom scheme keeps y < custom_lower ..."},
      {"custom_upper", "... or y > custom_upper"},
      {"ipw_intercept", "include an intercept in the IPW fit (true/false)"},
      {"emit_data", "write one generated sample to this CSV path"},
      {"table1", "use the table1 preset", true},
      {"mixture", "use the mixture-error preset", true},
      {"efficiency", "run the heavy-tailed efficiency study", true},
      {"timing", "include runtime in reports", true},
  };
  return table;
}

template <typename T>
T parse_as(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw InvalidArgument("cli", "invalid value '" + value + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw InvalidArgument("cli", "invalid boolean '" + value + "' for " + key);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

void write_output(const CliConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) throw Error("cli.io", "cannot write output file '" + config.out + "'");
  file << text;
}

void report_warnings(const CliConfig& config, const std::vector<std::string>& warnings, std::ostream& err) {
  if (config.verbosity < 1) return;
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

OptimizerConfig optimizer_config(const CliConfig& c, std::size_t dim) {
  OptimizerConfig o;
  o.max_evals = c.max_evals;
  o.initial_step = c.initial_step;
  o.simplex_tol = c.simplex_tol;
  o.bound = c.bound;
  o.smoothed_bandwidth = c.smoothed_bandwidth;
  o.line_polish = c.line_polish;
  std::stringstream points(c.starts);
  std::string point;
  while (std::getline(points, point, ';')) {
    if (trim(point).empty()) continue;
    Beta b;
    std::stringstream coords(point);
    std::string v;
    while (std::getline(coords, v, ',')) b.push_back(parse_as<double>("starts", trim(v)));
    if (b.size() != dim)
      throw InvalidArgument("cli", "start point '" + point + "' needs " + std::to_string(dim) + " coordinates");
    o.starts.push_back(std::move(b));
  }
  return o;
}

ResampleStarts resample_starts(const CliConfig& c) {
  if (c.resample_starts == "warm") return ResampleStarts::warm;
  if (c.resample_starts == "warm_and_grid") return ResampleStarts::warm_and_grid;
  throw InvalidArgument("cli", "resample_starts must be warm or warm_and_grid");
}

CiMethod ci_method(const CliConfig& c) {
  if (c.ci_method == "normal") return CiMethod::normal;
  if (c.ci_method == "percentile") return CiMethod::percentile;
  throw InvalidArgument("cli", "ci_method must be normal or percentile");
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json header(const CliConfig& config) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = config.command;
  j["config"] = Json::parse(config_json(config));
  return j;
}

std::string csv_header_lines(const CliConfig& config) {
  return "# schema_version=" + std::to_string(kSchemaVersion) + "\n# command=" + config.command +
         "\n# config=" + nlohmann::json::parse(config_json(config)).dump() + "\n";
}

std::string num(double v) { return nlohmann::json(v).dump(); }

struct LoadedData {
  ColumnMap columns;
  LoadResult load;
  CompleteCases cases;
  ModelSpec model;
};

LoadedData load_data(const CliConfig& c) {
  if (c.input.empty()) throw InvalidArgument("cli", "--input is required");
  if (c.columns.empty()) throw InvalidArgument("cli", "--columns is required");
  ColumnMap columns = ColumnMap::parse(c.columns);
  if (!c.anchor.empty()) columns.z = c.anchor;
  if (!std::filesystem::exists(c.input))
    throw Error("datasets.io", "input file '" + c.input + "' does not exist");
  LoadResult load = load_csv(c.input, columns);
  CompleteCases cases = complete_cases(load.records);
  ModelSpec model;
  model.anchor = columns.z;
  model.covariates = columns.x;
  return {std::move(columns), std::move(load), std::move(cases), std::move(model)};
}

Json rejects_json(const LoadResult& load) {
  Json rejects = Json::array();
  for (const auto& r : load.rejects) rejects.push_back({{"line", r.line}, {"reason", r.reason}});
  return rejects;
}

ScenarioSpec scenario_from(const CliConfig& c) {
  ScenarioSpec spec;
  if (c.preset == "mixture") {
    spec = mixture_scenario();
  } else if (c.preset == "table1") {
    if (c.scheme == "custom") {
      spec = table1_scenario(4, c.error);
      spec.scheme = SamplingScheme::outside(c.custom_lower, c.custom_upper);
      spec.name = "table1-custom-" + c.error;
    } else {
      spec = table1_scenario(parse_as<int>("scheme", c.scheme), c.error);
    }
  } else {
    throw InvalidArgument("cli", "unknown preset '" + c.preset + "'");
  }
  if (c.preset == "mixture" && c.scheme == "custom")
    spec.scheme = SamplingScheme::outside(c.custom_lower, c.custom_upper);
  spec.n = c.n;
  spec.replications = c.replications;
  spec.seed = c.seed;
  spec.threads = c.threads;
  spec.ci_level = c.ci_level;
  spec.ci_method = ci_method(c);
  spec.resample_starts = resample_starts(c);
  spec.ipw_intercept = c.ipw_intercept;
  spec.optimizer = optimizer_config(c, spec.model.beta0.size());
  const std::string estimators = c.estimators.empty() ? (c.command == "compare" ? "mrc,ipw" : "mrc") : c.estimators;
  spec.run_mrc = spec.run_ipw = false;
  std::stringstream ss(estimators);
  std::string e;
  while (std::getline(ss, e, ',')) {
    e = trim(e);
    if (e == "mrc") spec.run_mrc = true;
    else if (e == "ipw") spec.run_ipw = true;
    else throw InvalidArgument("cli", "unknown estimator '" + e + "'");
  }
  spec.resamples = c.resamples.value_or(c.command == "compare" ? 0 : 500);
  return spec;
}

int emit_data(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const ScenarioSpec spec = scenario_from(c);
  const auto sample = replication_sample(spec, 0);
  ColumnMap columns;
  columns.y = "y";
  columns.z = "z";
  for (std::size_t k = 1; k <= sample.data.d(); ++k) columns.x.push_back("x" + std::to_string(k));
  write_csv(std::filesystem::path(c.emit_data), to_records(sample.data), columns);
  Json j = header(c);
  j["emitted"] = {{"path", c.emit_data},
                  {"rows", sample.data.n()},
                  {"columns", columns.to_string()},
                  {"beta0", spec.model.beta0},
                  {"acceptance_rate", sample.acceptance_rate}};
  write_output(c, j.dump(2) + "\n", out);
  (void)err;
  return 0;
}

}  // namespace

void apply_setting(CliConfig& c, const std::string& key_in, const std::string& raw) {
  std::string key = key_in;
  for (char& ch : key)
    if (ch == '-') ch = '_';
  const std::string value = trim(raw);
  static const std::map<std::string, std::function<void(CliConfig&, const std::string&)>> setters = {
      {"input", [](CliConfig& c, const std::string& v) { c.input = v; }},
      {"columns", [](CliConfig& c, const std::string& v) { c.columns = v; }},
      {"anchor", [](CliConfig& c, const std::string& v) { c.anchor = v; }},
      {"out", [](CliConfig& c, const std::string& v) { c.out = v; }},
      {"format",
       [](CliConfig& c, const std::string& v) {
         if (v != "json" && v != "csv") throw InvalidArgument("cli", "format must be json or csv");
         c.format = v;
       }},
      {"seed", [](CliConfig& c, const std::string& v) { c.seed = parse_as<std::uint64_t>("seed", v); }},
      {"verbosity", [](CliConfig& c, const std::string& v) { c.verbosity = parse_as<int>("verbosity", v); }},
      {"threads", [](CliConfig& c, const std::string& v) { c.threads = parse_as<std::size_t>("threads", v); }},
      {"max_evals", [](CliConfig& c, const std::string& v) { c.max_evals = parse_as<std::size_t>("max_evals", v); }},
      {"initial_step", [](CliConfig& c, const std::string& v) { c.initial_step = parse_as<double>("initial_step", v); }},
      {"simplex_tol", [](CliConfig& c, const std::string& v) { c.simplex_tol = parse_as<double>("simplex_tol", v); }},
      {"bound", [](CliConfig& c, const std::string& v) { c.bound = parse_as<double>("bound", v); }},
      {"starts", [](CliConfig& c, const std::string& v) { c.starts = v; }},
      {"line_polish", [](CliConfig& c, const std::string& v) { c.line_polish = parse_bool("line_polish", v); }},
      {"smoothed_bandwidth",
       [](CliConfig& c, const std::string& v) { c.smoothed_bandwidth = parse_as<double>("smoothed_bandwidth", v); }},
      {"resamples", [](CliConfig& c, const std::string& v) { c.resamples = parse_as<std::size_t>("resamples", v); }},
      {"ci_level", [](CliConfig& c, const std::string& v) { c.ci_level = parse_as<double>("ci_level", v); }},
      {"ci_method", [](CliConfig& c, const std::string& v) { c.ci_method = v; }},
      {"resample_starts", [](CliConfig& c, const std::string& v) { c.resample_starts = v; }},
      {"ratio", [](CliConfig& c, const std::string& v) { c.ratio = v; }},
      {"preset", [](CliConfig& c, const std::string& v) { c.preset = v; }},
      {"table1", [](CliConfig& c, const std::string& v) { if (parse_bool("table1", v)) c.preset = "table1"; }},
      {"mixture", [](CliConfig& c, const std::string& v) { if (parse_bool("mixture", v)) c.preset = "mixture"; }},
      {"scheme", [](CliConfig& c, const std::string& v) { c.scheme = v; }},
      {"error",
       [](CliConfig& c, const std::string& v) {
         ErrorDist::parse(v);
         c.error = v;
       }},
      {"n", [](CliConfig& c, const std::string& v) { c.n = parse_as<std::size_t>("n", v); }},
      {"replications",
       [](CliConfig& c, const std::string& v) { c.replications = parse_as<std::size_t>("replications", v); }},
      {"estimators", [](CliConfig& c, const std::string& v) { c.estimators = v; }},
      {"custom_lower", [](CliConfig& c, const std::string& v) { c.custom_lower = parse_as<double>("custom_lower", v); }},
      {"custom_upper", [](CliConfig& c, const std::string& v) { c.custom_upper = parse_as<double>("custom_upper", v); }},
      {"ipw_intercept", [](CliConfig& c, const std::string& v) { c.ipw_intercept = parse_bool("ipw_intercept", v); }},
      {"emit_data", [](CliConfig& c, const std::string& v) { c.emit_data = v; }},
      {"efficiency", [](CliConfig& c, const std::string& v) { c.efficiency = parse_bool("efficiency", v); }},
      {"timing", [](CliConfig& c, const std::string& v) { c.timing = parse_bool("timing", v); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw InvalidArgument("cli", "unknown setting '" + key_in + "'");
  it->second(c, value);
}

void apply_config_file(CliConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cli.io", "cannot open config file '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("cli", path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(config, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
}

std::string config_json(const CliConfig& c) {
  Json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["format"] = c.format;
  if (c.command == "fit" || c.command == "infer") {
    j["input"] = c.input;
    j["columns"] = c.columns;
    j["anchor"] = c.anchor;
  }
  j["optimizer"] = {{"max_evals", c.max_evals},
                    {"initial_step", c.initial_step},
                    {"simplex_tol", c.simplex_tol},
                    {"bound", c.bound},
                    {"starts", c.starts},
                    {"line_polish", c.line_polish},
                    {"smoothed_bandwidth", c.smoothed_bandwidth}};
  if (c.command != "fit") {
    j["resample"] = {{"resamples", c.resamples ? Json(*c.resamples) : Json(nullptr)},
                     {"ci_level", c.ci_level},
                     {"ci_method", c.ci_method},
                     {"starts", c.resample_starts}};
  }
  if (c.command == "infer") j["ratio"] = c.ratio;
  if (c.command == "simulate" || c.command == "compare") {
    j["scenario"] = {{"preset", c.preset},
                     {"scheme", c.scheme},
                     {"error", c.error},
                     {"n", c.n},
                     {"replications", c.replications},
                     {"estimators", c.estimators},
                     {"custom_lower", c.custom_lower},
                     {"custom_upper", c.custom_upper},
                     {"ipw_intercept", c.ipw_intercept},
                     {"emit_data", c.emit_data},
                     {"efficiency", c.efficiency}};
  }
  return j.dump();
}

int cmd_fit(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const LoadedData d = load_data(c);
  const Dataset& data = d.cases.data;
  const FitResult fit = mrc_fit(data, d.model, optimizer_config(c, data.d()));
  report_warnings(c, fit.warnings, err);

  std::string text;
  if (c.format == "json") {
    Json j = header(c);
    j["n"] = data.n();
    j["d"] = data.d();
    j["provenance"] = Json::parse(provenance_json(d.cases.provenance));
    j["rejects"] = rejects_json(d.load);
    Json beta;
    for (std::size_t k = 0; k < data.d(); ++k) beta[d.model.covariates[k]] = fit.beta_hat[k];
    j["anchor"] = d.model.anchor;
    j["beta_hat"] = beta;
    j["objective"] = {{"raw", fit.objective.raw}, {"normalized", fit.objective.normalized}};
    j["evals"] = fit.evals;
    j["converged"] = fit.converged;
    j["start_used"] = fit.start_used;
    j["warnings"] = fit.warnings;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s << csv_header_lines(c) << "# n=" << data.n() << ",objective_raw=" << num(fit.objective.raw)
      << ",objective_normalized=" << num(fit.objective.normalized) << ",converged=" << fit.converged << "\n";
    for (const auto& w : fit.warnings) s << "# warning=" << w << "\n";
    s << "coefficient,estimate\n";
    for (std::size_t k = 0; k < data.d(); ++k) s << d.model.covariates[k] << ',' << num(fit.beta_hat[k]) << "\n";
    text = s.str();
  }
  write_output(c, text, out);
  return 0;
}

int cmd_infer(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const LoadedData d = load_data(c);
  const Dataset& data = d.cases.data;
  const OptimizerConfig ocfg = optimizer_config(c, data.d());
  const FitResult fit = mrc_fit(data, d.model, ocfg);
  std::vector<std::string> warnings = fit.warnings;

  const std::size_t resamples = c.resamples.value_or(500);
  std::optional<ResampleSummary> summary;
  std::optional<RatioInference> ratio;
  std::string ratio_label;
  if (resamples == 0) {
    warnings.push_back("resamples = 0: standard errors and intervals are not computed");
  } else {
    ResampleConfig rcfg;
    rcfg.replicates = resamples;
    rcfg.seed = c.seed;
    rcfg.ci_level = c.ci_level;
    rcfg.ci_method = ci_method(c);
    rcfg.starts = resample_starts(c);
    rcfg.threads = c.threads;
    summary = resample_fit(data, d.model, fit, rcfg, ocfg);
    warnings.insert(warnings.end(), summary->warnings.begin(), summary->warnings.end());
    if (!c.ratio.empty()) {
      const auto slash = c.ratio.find('/');
      if (slash == std::string::npos) throw InvalidArgument("cli", "--ratio must look like num/den");
      const std::string num_name = trim(c.ratio.substr(0, slash));
      const std::string den_name = trim(c.ratio.substr(slash + 1));
      auto index_of = [&](const std::string& name) -> std::size_t {
        if (name == d.model.anchor) return kAnchorIndex;
        for (std::size_t k = 0; k < d.model.covariates.size(); ++k)
          if (d.model.covariates[k] == name) return k;
        throw InvalidArgument("cli", "--ratio names unknown covariate '" + name + "'");
      };
      const std::size_t num_idx = index_of(num_name);
      if (num_idx == kAnchorIndex) throw InvalidArgument("cli", "--ratio numerator cannot be the anchor");
      ratio = derived_ratio_ci(*summary, fit, num_idx, index_of(den_name), CiMethod::percentile);
      ratio_label = num_name + "/" + den_name;
      warnings.insert(warnings.end(), ratio->warnings.begin(), ratio->warnings.end());
    }
  }
  report_warnings(c, warnings, err);

  std::string text;
  if (c.format == "json") {
    Json j = header(c);
    j["n"] = data.n();
    j["d"] = data.d();
    j["provenance"] = Json::parse(provenance_json(d.cases.provenance));
    j["rejects"] = rejects_json(d.load);
    j["anchor"] = d.model.anchor;
    Json coefs = Json::array();
    for (std::size_t k = 0; k < data.d(); ++k) {
      Json row = {{"name", d.model.covariates[k]}, {"estimate", fit.beta_hat[k]}};
      if (summary) {
        row["se"] = summary->se[k];
        row["ci"] = {summary->ci[k].lower, summary->ci[k].upper};
      }
      coefs.push_back(row);
    }
    j["coefficients"] = coefs;
    j["objective"] = {{"raw", fit.objective.raw}, {"normalized", fit.objective.normalized}};
    if (summary) {
      j["resampling"] = {{"replicates", summary->replicates}, {"failed", summary->n_failed}};
    }
    if (ratio) {
      j["ratio"] = {{"name", ratio_label},
                    {"estimate", ratio->estimate},
                    {"se", number_or_null(ratio->se)},
                    {"ci", {ratio->ci.lower, ratio->ci.upper}},
                    {"dropped", ratio->dropped}};
    }
    j["warnings"] = warnings;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s << csv_header_lines(c) << "# n=" << data.n() << ",objective_raw=" << num(fit.objective.raw) << "\n";
    for (const auto& w : warnings) s << "# warning=" << w << "\n";
    s << "coefficient,estimate,se,ci_lower,ci_upper\n";
    for (std::size_t k = 0; k < data.d(); ++k) {
      s << d.model.covariates[k] << ',' << num(fit.beta_hat[k]);
      if (summary) s << ',' << num(summary->se[k]) << ',' << num(summary->ci[k].lower) << ',' << num(summary->ci[k].upper);
      else s << ",,,";
      s << "\n";
    }
    if (ratio) {
      s << ratio_label << ',' << num(ratio->estimate) << ',' << num(ratio->se) << ',' << num(ratio->ci.lower) << ','
        << num(ratio->ci.upper) << "\n";
    }
    text = s.str();
  }
  write_output(c, text, out);
  return 0;
}

int cmd_simulate(const CliConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.emit_data.empty()) return emit_data(c, out, err);
  if (c.efficiency) {
    EfficiencyConfig ecfg;
    ecfg.replications = c.replications;
    ecfg.n = c.n;
    ecfg.seed = c.seed;
    ecfg.threads = c.threads;
    ecfg.optimizer = optimizer_config(c, 1);
    const EfficiencyResult r = run_efficiency_study(ecfg);
    std::string text;
    if (c.format == "json") {
      Json j = header(c);
      j["efficiency"] = {{"mean_biased", r.mean_biased},
                         {"sd_biased", r.sd_biased},
                         {"mean_prospective", r.mean_prospective},
                         {"sd_prospective", r.sd_prospective},
                         {"relative_efficiency", number_or_null(r.relative_efficiency)}};
      text = j.dump(2) + "\n";
    } else {
      text = csv_header_lines(c) + "sd_biased,sd_prospective,relative_efficiency\n" + num(r.sd_biased) + "," +
             num(r.sd_prospective) + "," + num(r.relative_efficiency) + "\n";
    }
    write_output(c, text, out);
    return 0;
  }
  const ScenarioSpec spec = scenario_from(c);
  const SimulationReport report = run_scenario(spec);
  report_warnings(c, report.warnings, err);
  const std::string cfg = config_json(c);
  write_output(c, c.format == "json" ? report_json(report, cfg, c.timing) : report_csv(report, cfg, c.timing), out);
  return 0;
}

int cmd_compare(const CliConfig& c, std::ostream& out, std::ostream& err) {
  CliConfig both = c;
  if (both.estimators.empty()) both.estimators = "mrc,ipw";
  return cmd_simulate(both, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum rank correlation estimation under response-biased sampling", "mrc"};
  app.require_subcommand(1);
  std::map<std::string, std::string> values;
  std::string config_path;
  const std::map<std::string, std::string> descriptions = {
      {"fit", "estimate coefficients from a CSV file"},
      {"infer", "estimate with random-weighting standard errors and intervals"},
      {"simulate", "run a simulation scenario or the efficiency study"},
      {"compare", "run MRC and IPW side by side on the same simulated samples"},
  };
  for (const auto& [name, description] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "key = value settings file; overrides flags");
    for (const auto& info : option_table()) {
      std::string flag = std::string("--") + info.key;
      for (char& ch : flag)
        if (ch == '_') ch = '-';
      auto& slot = values[std::string(info.key)];
      if (info.flag) sub->add_flag_function(flag, [&slot](std::int64_t) { slot = "true"; }, info.help);
      else sub->add_option(flag, slot, info.help);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  CliConfig config;
  config.command = app.get_subcommands().front()->get_name();
  try {
    for (const auto& info : option_table()) {
      std::string flag = std::string("--") + info.key;
      for (char& ch : flag)
        if (ch == '_') ch = '-';
      if (app.get_subcommands().front()->count(flag) > 0) apply_setting(config, info.key, values[info.key]);
    }
    if (!config_path.empty()) apply_config_file(config, config_path);
  } catch (const Error& e) {
    err << Json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }

  try {
    if (config.command == "fit") return cmd_fit(config, out, err);
    if (config.command == "infer") return cmd_infer(config, out, err);
    if (config.command == "simulate") return cmd_simulate(config, out, err);
    return cmd_compare(config, out, err);
  } catch (const Error& e) {
    err << Json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << Json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
}

}  // namespace mrc::cli
