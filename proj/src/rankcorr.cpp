#include "mrc/rankcorr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "mrc/error.hpp"
#include "mrc/fenwick.hpp"

namespace mrc {
namespace {

ObjectiveValue make_value(double raw, std::size_t n) {
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  return {raw, raw / pairs};
}

void check_weights(std::span<const double> weights, std::size_t n) {
  if (weights.size() != n)
    throw InvalidArgument("rankcorr", "weight vector has length " + std::to_string(weights.size()) +
                                          ", expected " + std::to_string(n));
  for (double e : weights) {
    if (!(e >= 0.0) || !std::isfinite(e))
      throw InvalidArgument("rankcorr", "weights must be finite and nonnegative");
  }
}

// Dense ranks of s: tied values share a rank, ranks are 0..k-1.
std::vector<std::size_t> dense_ranks(const std::vector<double>& s, std::size_t& n_ranks) {
  const std::size_t n = s.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&s](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  std::vector<std::size_t> rank(n);
  std::size_t r = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && s[order[k]] != s[order[k - 1]]) ++r;
    rank[order[k]] = r;
  }
  n_ranks = n == 0 ? 0 : r + 1;
  return rank;
}

template <typename T, typename WeightFn>
T sweep(const Dataset& data, const std::vector<double>& s, WeightFn weight) {
  std::size_t n_ranks = 0;
  const auto rank = dense_ranks(s, n_ranks);
  FenwickTree<T> tree(n_ranks);
  const auto& order = data.y_order();
  const auto& groups = data.y_groups();
  T total{};
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    // Query every member of a tied-y group before inserting any of them.
    for (std::size_t k = groups[g]; k < groups[g + 1]; ++k) {
      const std::size_t i = order[k];
      total += weight(i) * tree.prefix(rank[i]);
    }
    for (std::size_t k = groups[g]; k < groups[g + 1]; ++k) {
      const std::size_t i = order[k];
      tree.add(rank[i], weight(i));
    }
  }
  return total;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

ObjectiveValue evaluate_naive(const Dataset& data, std::span<const double> beta) {
  const auto s = data.scores(beta);
  const auto& y = data.y();
  const std::size_t n = data.n();
  std::int64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && s[i] > s[j] && y[i] > y[j]) ++count;
    }
  }
  return make_value(static_cast<double>(count), n);
}

ObjectiveValue evaluate_fast(const Dataset& data, std::span<const double> beta) {
  const auto s = data.scores(beta);
  const auto count = sweep<std::int64_t>(data, s, [](std::size_t) { return std::int64_t{1}; });
  return make_value(static_cast<double>(count), data.n());
}

ObjectiveValue evaluate_weighted(const Dataset& data, std::span<const double> beta,
                                 std::span<const double> weights) {
  check_weights(weights, data.n());
  const auto s = data.scores(beta);
  const double raw = sweep<double>(data, s, [weights](std::size_t i) { return weights[i]; });
  return make_value(raw, data.n());
}

ObjectiveValue evaluate_weighted_naive(const Dataset& data, std::span<const double> beta,
                                       std::span<const double> weights) {
  check_weights(weights, data.n());
  const auto s = data.scores(beta);
  const auto& y = data.y();
  const std::size_t n = data.n();
  long double raw = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && s[i] > s[j] && y[i] > y[j])
        raw += static_cast<long double>(weights[i]) * weights[j];
    }
  }
  return make_value(static_cast<double>(raw), n);
}

double evaluate_smoothed(const Dataset& data, std::span<const double> beta, double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw InvalidArgument("rankcorr", "bandwidth must be positive");
  const auto s = data.scores(beta);
  const auto& y = data.y();
  const std::size_t n = data.n();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && y[i] > y[j]) total += sigmoid((s[i] - s[j]) / bandwidth);
    }
  }
  return total;
}

LineMax line_maximize(const Dataset& data, std::span<const double> beta, std::size_t k,
                      std::span<const double> weights, double lo, double hi) {
  const std::size_t n = data.n();
  if (k >= data.d()) throw InvalidArgument("rankcorr", "coordinate index out of range");
  if (!weights.empty()) check_weights(weights, n);
  if (!(lo < hi)) throw InvalidArgument("rankcorr", "empty search interval");
  const auto s = data.scores(beta);
  const auto& y = data.y();
  const auto a = data.x().col(static_cast<Eigen::Index>(k));

  // Value as t -> -infinity, then +w / -w as each pair crosses.
  double value = 0.0;
  std::vector<std::pair<double, double>> events;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (y[i] == y[j]) continue;
      const auto [h, l] = y[i] > y[j] ? std::pair{i, j} : std::pair{j, i};
      const double w = weights.empty() ? 1.0 : weights[h] * weights[l];
      const double ds = s[h] - s[l];
      const double da = a(static_cast<Eigen::Index>(h)) - a(static_cast<Eigen::Index>(l));
      if (da == 0.0) {
        if (ds > 0.0) value += w;
      } else if (da > 0.0) {
        events.emplace_back(-ds / da, w);
      } else {
        value += w;
        events.emplace_back(-ds / da, -w);
      }
    }
  }
  std::sort(events.begin(), events.end());

  LineMax best{0.0, -1.0};
  auto consider = [&](double from, double to, double v) {
    from = std::max(from, lo);
    to = std::min(to, hi);
    if (!(from < to)) return;
    const double t = from + (to - from) / 2.0;
    if (v > best.value || (v == best.value && std::abs(t) < std::abs(best.t))) best = {t, v};
  };
  double left = -std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < events.size();) {
    const double t = events[e].first;
    consider(left, t, value);
    // Crossings that coincide in exact arithmetic can differ in the last bits.
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    for (; e < events.size() && events[e].first <= t + tol; ++e) value += events[e].second;
    left = events[e - 1].first;
  }
  consider(left, std::numeric_limits<double>::infinity(), value);
  return best;
}

}  // namespace mrc
