#include "mrc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "mrc/error.hpp"
#include "mrc/parallel.hpp"
#include "mrc/rankcorr.hpp"

namespace mrc {

void ResampleConfig::validate() const {
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw InvalidArgument("inference", "ci_level must lie in (0, 1)");
}

std::vector<double> exponential_weights(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> law(1.0);
  std::vector<double> e(n);
  for (double& ei : e) ei = law(rng);
  return e;
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw InvalidArgument("inference", "quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double normal_critical(double level) {
  const boost::math::normal_distribution<double> std_normal;
  return boost::math::quantile(std_normal, 1.0 - (1.0 - level) / 2.0);
}

namespace {

Interval interval_for(const std::vector<double>& values, double center, double se, double level, CiMethod method) {
  if (method == CiMethod::normal) {
    const double half = normal_critical(level) * se;
    return {center - half, center + half};
  }
  const double alpha = 1.0 - level;
  return {quantile(values, alpha / 2.0), quantile(values, 1.0 - alpha / 2.0)};
}

}  // namespace

ResampleSummary resample_fit(const Dataset& data, const ModelSpec& spec, const FitResult& fit,
                             const ResampleConfig& rcfg, const OptimizerConfig& ocfg,
                             const WeightSampler& sampler) {
  rcfg.validate();
  const std::size_t d = data.d();
  if (spec.dim() != d || fit.beta_hat.size() != d)
    throw InvalidArgument("inference", "fit, model and dataset dimensions disagree");
  ocfg.validate(d);

  OptimizerConfig warm = ocfg;
  warm.starts = {fit.beta_hat};
  warm.use_grid = false;
  OptimizerConfig full = warm;
  for (auto& s : start_points(d, ocfg)) {
    if (s != fit.beta_hat) full.starts.push_back(std::move(s));
  }

  std::vector<std::optional<Beta>> results(rcfg.replicates);
  parallel_for(rcfg.replicates, rcfg.threads, [&](std::size_t k) {
    Rng rng = substream(rcfg.seed, k);
    const std::vector<double> weights = sampler(data.n(), rng);
    const Objective objective = [&data, &weights](std::span<const double> b) {
      return evaluate_weighted(data, b, weights).raw;
    };
    if (rcfg.starts == ResampleStarts::warm) {
      try {
        auto r = nelder_mead_max(objective, d, warm);
        if (r.converged) {
          if (ocfg.line_polish) polish_coordinates(data, r.beta, r.value, weights, ocfg);
          results[k] = std::move(r.beta);
          return;
        }
      } catch (const Error&) {
      }
    }
    try {
      auto r = nelder_mead_max(objective, d, full);
      if (ocfg.line_polish) polish_coordinates(data, r.beta, r.value, weights, ocfg);
      results[k] = std::move(r.beta);
    } catch (const Error&) {
      results[k].reset();
    }
  });

  ResampleSummary summary;
  summary.replicates = rcfg.replicates;
  summary.ci_level = rcfg.ci_level;
  summary.ci_method = rcfg.ci_method;
  for (auto& r : results) {
    if (r) summary.draws.push_back(std::move(*r));
    else ++summary.n_failed;
  }
  if (summary.n_failed * 10 > rcfg.replicates)
    throw InferenceUnreliable(std::to_string(summary.n_failed) + " of " + std::to_string(rcfg.replicates) +
                              " replicates failed to optimize");
  if (summary.n_failed > 0)
    summary.warnings.push_back(std::to_string(summary.n_failed) + " replicate(s) failed and were excluded");
  if (summary.draws.size() < 2) summary.warnings.push_back("fewer than two replicates; standard errors are 0");

  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> column;
    column.reserve(summary.draws.size());
    for (const auto& row : summary.draws) column.push_back(row[k]);
    const double se = sample_sd(column);
    summary.se.push_back(se);
    if (column.empty()) {
      summary.ci.push_back({fit.beta_hat[k], fit.beta_hat[k]});
    } else {
      summary.ci.push_back(interval_for(column, fit.beta_hat[k], se, rcfg.ci_level, rcfg.ci_method));
    }
  }
  return summary;
}

RatioInference derived_ratio_ci(const ResampleSummary& summary, const FitResult& fit, std::size_t num,
                                std::size_t den, CiMethod method) {
  const std::size_t d = fit.beta_hat.size();
  if (num >= d) throw InvalidArgument("inference", "numerator index out of range");
  if (den != kAnchorIndex && den >= d) throw InvalidArgument("inference", "denominator index out of range");
  const auto denominator = [den](const Beta& b) { return den == kAnchorIndex ? 1.0 : b[den]; };
  const double den_hat = denominator(fit.beta_hat);
  if (den_hat == 0.0) throw InvalidArgument("inference", "denominator estimate is zero");

  RatioInference out;
  out.estimate = fit.beta_hat[num] / den_hat;
  std::vector<double> ratios;
  for (const auto& row : summary.draws) {
    const double dv = denominator(row);
    if (std::abs(dv) <= 1e-12) {
      ++out.dropped;
      continue;
    }
    ratios.push_back(row[num] / dv);
  }
  out.used = ratios.size();
  if (out.dropped > 0)
    out.warnings.push_back(std::to_string(out.dropped) + " replicate(s) with a near-zero denominator dropped");
  if (out.dropped * 10 > summary.draws.size())
    throw InferenceUnreliable(std::to_string(out.dropped) + " of " + std::to_string(summary.draws.size()) +
                              " replicate denominators are near zero");
  out.se = sample_sd(ratios);
  out.ci = ratios.empty() ? Interval{out.estimate, out.estimate}
                          : interval_for(ratios, out.estimate, out.se, summary.ci_level, method);
  return out;
}

}  // namespace mrc
