#include "mrc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "mrc/error.hpp"

namespace mrc {
namespace {

struct Vertex {
  Beta x;
  double f = 0.0;
  std::uint64_t age = 0;
};

// Better vertices first; equal values keep the older vertex ahead.
bool ahead(const Vertex& a, const Vertex& b) {
  if (a.f != b.f) return a.f > b.f;
  return a.age < b.age;
}

class NonFinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Simplex {
 public:
  Simplex(const Objective& objective, const OptimizerConfig& config)
      : objective_(objective), config_(config) {}

  StartDiagnostic run(const Beta& start, double step) {
    const std::size_t d = start.size();
    std::vector<Vertex> v;
    v.push_back(make(clamp(start)));
    for (std::size_t k = 0; k < d; ++k) {
      Beta x = start;
      x[k] += step;
      v.push_back(make(clamp(std::move(x))));
    }

    bool converged = false;
    while (true) {
      std::stable_sort(v.begin(), v.end(), ahead);
      if (diameter(v) < config_.simplex_tol) {
        converged = true;
        break;
      }
      if (evals_ >= config_.max_evals) break;

      const Vertex& worst = v.back();
      const Beta c = centroid(v);
      Vertex r = make(along(c, worst.x, -config_.reflection));
      if (r.f > v.front().f) {
        Vertex e = make(along(c, r.x, config_.expansion));
        v.back() = e.f > r.f ? std::move(e) : std::move(r);
        continue;
      }
      if (r.f > v[v.size() - 2].f) {
        v.back() = std::move(r);
        continue;
      }
      if (r.f > worst.f) {
        Vertex oc = make(along(c, r.x, config_.contraction));
        if (oc.f >= r.f) {
          v.back() = std::move(oc);
          continue;
        }
      } else {
        Vertex ic = make(along(c, worst.x, config_.contraction));
        if (ic.f > worst.f) {
          v.back() = std::move(ic);
          continue;
        }
      }
      for (std::size_t k = 1; k < v.size(); ++k) {
        v[k] = make(along(v.front().x, v[k].x, config_.shrink));
      }
    }
    std::stable_sort(v.begin(), v.end(), ahead);
    StartDiagnostic diag;
    diag.start = start;
    diag.best = v.front().x;
    diag.value = v.front().f;
    diag.evals = evals_;
    diag.converged = converged;
    return diag;
  }

  std::size_t evals() const { return evals_; }

 private:
  Vertex make(Beta x) {
    const double f = objective_(x);
    ++evals_;
    if (!std::isfinite(f)) throw NonFinite("objective returned a non-finite value");
    return {std::move(x), f, next_age_++};
  }

  Beta clamp(Beta x) const {
    for (double& xi : x) xi = std::clamp(xi, -config_.bound, config_.bound);
    return x;
  }

  // origin + t * (target - origin), clamped to the box.
  Beta along(const Beta& origin, const Beta& target, double t) const {
    Beta x(origin.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = origin[k] + t * (target[k] - origin[k]);
    return clamp(std::move(x));
  }

  static Beta centroid(const std::vector<Vertex>& v) {
    const std::size_t d = v.front().x.size();
    Beta c(d, 0.0);
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
      for (std::size_t j = 0; j < d; ++j) c[j] += v[k].x[j];
    for (double& cj : c) cj /= static_cast<double>(v.size() - 1);
    return c;
  }

  static double diameter(const std::vector<Vertex>& v) {
    double diam = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k)
      for (std::size_t j = 0; j < v[k].x.size(); ++j)
        diam = std::max(diam, std::abs(v[k].x[j] - v.front().x[j]));
    return diam;
  }

  const Objective& objective_;
  const OptimizerConfig& config_;
  std::size_t evals_ = 0;
  std::uint64_t next_age_ = 0;
};

}  // namespace

void OptimizerConfig::validate(std::size_t dim) const {
  auto fail = [](const std::string& what) { throw InvalidArgument("optimize", what); };
  if (dim < 1) fail("dimension must be at least 1");
  if (!(reflection > 0.0)) fail("reflection must be > 0");
  if (!(expansion > 1.0)) fail("expansion must be > 1");
  if (!(contraction > 0.0 && contraction < 1.0)) fail("contraction must lie in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) fail("shrink must lie in (0, 1)");
  if (max_evals < dim + 2) fail("max_evals must be at least d + 2");
  if (!(simplex_tol > 0.0)) fail("simplex_tol must be > 0");
  if (!(initial_step > 0.0)) fail("initial_step must be > 0");
  if (!(bound > 0.0)) fail("bound must be > 0");
  if (smoothed_bandwidth < 0.0) fail("smoothed_bandwidth must be >= 0");
  for (const auto& s : starts) {
    if (s.size() != dim) fail("start point has wrong dimension");
  }
}

std::vector<Beta> default_start_grid(std::size_t dim, double step) {
  const std::size_t m = std::min<std::size_t>(dim, 4);
  std::size_t combos = 1;
  for (std::size_t k = 0; k < m; ++k) combos *= 3;
  std::vector<Beta> grid;
  grid.emplace_back(dim, 0.0);
  for (std::size_t c = 0; c < combos; ++c) {
    Beta b(dim, 0.0);
    std::size_t code = c;
    bool origin = true;
    for (std::size_t k = 0; k < m; ++k) {
      const int digit = static_cast<int>(code % 3) - 1;
      code /= 3;
      b[k] = digit * step;
      origin = origin && digit == 0;
    }
    if (!origin) grid.push_back(std::move(b));
  }
  return grid;
}

std::vector<Beta> start_points(std::size_t dim, const OptimizerConfig& config) {
  std::vector<Beta> starts = config.starts;
  if (config.use_grid) {
    for (auto& g : default_start_grid(dim, config.initial_step)) {
      if (std::find(starts.begin(), starts.end(), g) == starts.end()) starts.push_back(std::move(g));
    }
  }
  return starts;
}

SimplexResult nelder_mead_max(const Objective& objective, std::size_t dim, const OptimizerConfig& config) {
  config.validate(dim);
  const std::vector<Beta> starts = start_points(dim, config);
  if (starts.empty()) throw InvalidArgument("optimize", "no start points configured");

  SimplexResult result;
  bool have_best = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Simplex simplex(objective, config);
    StartDiagnostic diag;
    try {
      diag = simplex.run(starts[s], config.initial_step);
    } catch (const NonFinite& e) {
      diag.start = starts[s];
      diag.evals = simplex.evals();
      diag.error = e.what();
    }
    result.evals += diag.evals;
    if (diag.error.empty() && (!have_best || diag.value > result.value)) {
      have_best = true;
      result.beta = diag.best;
      result.value = diag.value;
      result.start_used = s;
      result.converged = diag.converged;
    }
    result.starts.push_back(std::move(diag));
  }
  if (!have_best) throw OptimizerFailure("every start produced a non-finite objective value");

  for (std::size_t r = 0; r < config.max_restarts; ++r) {
    Simplex simplex(objective, config);
    StartDiagnostic diag;
    try {
      diag = simplex.run(result.beta, config.initial_step);
    } catch (const NonFinite&) {
      result.evals += simplex.evals();
      break;
    }
    result.evals += diag.evals;
    if (!(diag.value > result.value)) break;
    result.beta = diag.best;
    result.value = diag.value;
    result.converged = diag.converged;
  }
  return result;
}

std::size_t polish_coordinates(const Dataset& data, Beta& beta, double& value, std::span<const double> weights,
                               const OptimizerConfig& config) {
  const double n = static_cast<double>(data.n());
  if (n * (n - 1.0) / 2.0 > static_cast<double>(kMaxPolishPairs)) return 0;
  auto eval = [&](const Beta& b) {
    return weights.empty() ? evaluate_fast(data, b).raw : evaluate_weighted(data, b, weights).raw;
  };
  std::size_t evals = 0;
  for (std::size_t round = 0; round < config.max_restarts; ++round) {
    bool improved = false;
    for (std::size_t k = 0; k < beta.size(); ++k) {
      const auto line = line_maximize(data, beta, k, weights, -config.bound - beta[k], config.bound - beta[k]);
      if (!(line.value > value)) continue;
      Beta candidate = beta;
      candidate[k] = std::clamp(candidate[k] + line.t, -config.bound, config.bound);
      const double v = eval(candidate);
      ++evals;
      // The sweep value can be off by rounding on very short segments.
      if (v > value) {
        beta = std::move(candidate);
        value = v;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return evals;
}

FitResult mrc_fit(const Dataset& data, const ModelSpec& spec, const OptimizerConfig& config) {
  const std::size_t d = data.d();
  if (spec.dim() == 0) throw InvalidArgument("optimize", "no free coefficients to estimate");
  if (spec.dim() != d)
    throw InvalidArgument("optimize", "model has " + std::to_string(spec.dim()) +
                                          " free covariates but the dataset has " + std::to_string(d));
  config.validate(d);

  FitResult fit;
  for (std::size_t k = 0; k < d; ++k) {
    const auto col = data.x().col(static_cast<Eigen::Index>(k));
    if ((col.array() == col(0)).all()) {
      fit.warnings.push_back("covariate '" + spec.covariates[k] +
                             "' is constant; its coefficient is not identifiable");
    }
  }

  OptimizerConfig cfg = config;
  cfg.starts = start_points(d, config);
  cfg.use_grid = false;

  Objective objective;
  if (config.smoothed_bandwidth > 0.0) {
    const double h = config.smoothed_bandwidth;
    objective = [&data, h](std::span<const double> b) { return evaluate_smoothed(data, b, h); };
  } else {
    objective = [&data](std::span<const double> b) { return evaluate_fast(data, b).raw; };
  }
  auto best = nelder_mead_max(objective, d, cfg);
  if (config.line_polish && config.smoothed_bandwidth == 0.0)
    best.evals += polish_coordinates(data, best.beta, best.value, {}, config);
  fit.beta_hat = std::move(best.beta);
  fit.objective = evaluate_fast(data, fit.beta_hat);
  fit.evals = best.evals;
  fit.start_used = best.start_used;
  fit.converged = best.converged;
  fit.starts = std::move(best.starts);
  return fit;
}

}  // namespace mrc
