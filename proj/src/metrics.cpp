#include "anticoord/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anticoord/errors.hpp"

namespace anticoord {

double jain_binomial(const GameShape& shape) {
  shape.validate();
  const double ck = static_cast<double>(shape.n_channels) * static_cast<double>(shape.n_signals);
  const double spare = static_cast<double>(shape.n_agents - shape.n_channels);
  return ck / (ck + spare);
}

namespace {

template <class T>
double jain_of(std::span<const T> alloc) {
  if (alloc.empty()) throw UndefinedInput("Jain index of an empty allocation");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (T x : alloc) {
    const double v = static_cast<double>(x);
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0.0) throw UndefinedInput("Jain index of an all-zero allocation");
  return sum * sum / (static_cast<double>(alloc.size()) * sum_sq);
}

}  // namespace

double jain_allocation(std::span<const std::size_t> alloc) { return jain_of(alloc); }
double jain_allocation(std::span<const double> alloc) { return jain_of(alloc); }

std::size_t min_signals_for_fairness(double epsilon, std::size_t n_agents, std::size_t n_channels) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  GameShape{n_agents, n_channels, 1}.validate();
  const double threshold = (1.0 - epsilon) / epsilon *
                           (static_cast<double>(n_agents) / static_cast<double>(n_channels) - 1.0);
  // K must strictly exceed the threshold; a threshold within rounding of an
  // integer counts as that integer.
  const double nearest = std::round(threshold);
  const double floor_value = std::abs(threshold - nearest) <= 1e-9 * std::max(1.0, threshold)
                                 ? nearest
                                 : std::floor(threshold);
  return static_cast<std::size_t>(std::max(0.0, floor_value)) + 1;
}

double throughput(const ThroughputWindow& window, const GameShape& shape) {
  if (window.slots == 0) throw UndefinedInput("throughput of a zero-slot window");
  if (window.successes > shape.n_channels * window.slots) {
    throw ContractViolation("more successes than channel-slots");
  }
  return static_cast<double>(window.successes) /
         (static_cast<double>(shape.n_channels) * static_cast<double>(window.slots));
}

double group_fairness(std::span<const double> per_agent_throughput,
                      std::span<const std::size_t> join_order) {
  const std::size_t n = join_order.size();
  if (n < 4) throw ContractViolation("group fairness needs at least four agents");
  if (per_agent_throughput.size() != n) throw ContractViolation("throughput/join order size mismatch");
  const std::size_t quarter = (n + 3) / 4;
  double first = 0.0;
  double last = 0.0;
  for (std::size_t j = 0; j < quarter; ++j) {
    first += per_agent_throughput[join_order[j]];
    last += per_agent_throughput[join_order[n - 1 - j]];
  }
  if (first == 0.0 && last == 0.0) {
    throw UndefinedInput("group fairness with zero throughput in both groups");
  }
  if (first == 0.0) return std::numeric_limits<double>::infinity();
  return last / first;  // equal group sizes, so the ratio of sums is the ratio of means
}

// Accumulates deviations from the first sample so that constant inputs give
// their value back exactly.
double mean(std::span<const double> samples) {
  if (samples.empty()) throw UndefinedInput("mean of no samples");
  const double pivot = samples.front();
  double shift = 0.0;
  for (double x : samples) shift += x - pivot;
  return pivot + shift / static_cast<double>(samples.size());
}

Interval confidence_interval(std::span<const double> samples) {
  if (samples.size() < 2) throw UndefinedInput("confidence interval needs at least two samples");
  const double m = mean(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  const double n = static_cast<double>(samples.size());
  const double s = std::sqrt(ss / (n - 1.0));
  return {m, 1.96 * s / std::sqrt(n)};
}

double log_log_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ContractViolation("slope fit needs two or more matching points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace anticoord
