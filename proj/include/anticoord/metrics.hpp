#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "anticoord/game.hpp"

namespace anticoord {

// Per-agent number of signal values owned after convergence.
using AllocationVector = std::vector<std::size_t>;

struct ThroughputWindow {
  std::uint64_t slots = 0;
  std::uint64_t successes = 0;  // (channel, slot) pairs with exactly one transmitter
};

struct Interval {
  double mean = 0.0;
  double halfwidth = 0.0;

  double lower() const { return mean - halfwidth; }
  double upper() const { return mean + halfwidth; }
};

// Jain index of Binomial(K, C/N) win counts: CK / (CK + N - C).
double jain_binomial(const GameShape& shape);

// (sum x)^2 / (N sum x^2). Throws UndefinedInput for empty or all-zero input.
double jain_allocation(std::span<const std::size_t> alloc);
double jain_allocation(std::span<const double> alloc);

// Smallest integer K with K > (1-eps)/eps * (N/C - 1). The product is compared
// with a 1e-9 relative tolerance so that decimal inputs such as eps = 0.1 are
// treated as exact.
std::size_t min_signals_for_fairness(double epsilon, std::size_t n_agents, std::size_t n_channels);

double throughput(const ThroughputWindow& window, const GameShape& shape);

// Mean of the last ceil(N/4) joiners divided by mean of the first ceil(N/4).
// join_order[j] is the agent index of the j-th agent to join. Returns +inf for
// a zero denominator; throws UndefinedInput when both groups are zero.
double group_fairness(std::span<const double> per_agent_throughput,
                      std::span<const std::size_t> join_order);

// Normal-approximation 95% interval: mean +- 1.96 s / sqrt(n).
Interval confidence_interval(std::span<const double> samples);

double mean(std::span<const double> samples);

// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace anticoord
