#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "anticoord/rng.hpp"
#include "anticoord/strategy.hpp"

namespace anticoord::testing {

// Property cases per invariant.
inline constexpr std::size_t kCases = 1000;

// Runs `body(rng, case_index)` for `cases` independently seeded cases.
inline void for_cases(std::uint64_t master, std::size_t cases,
                      const std::function<void(Rng&, std::size_t)>& body) {
  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng = make_rng(derive_seed(master, i));
    body(rng, i);
  }
}

inline std::size_t draw_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + uniform_below(rng, static_cast<std::uint32_t>(hi - lo + 1));
}

inline StrategyTable random_table(Rng& rng, std::size_t k, std::size_t c, double p_quiet) {
  std::vector<Channel> entries(k);
  for (auto& e : entries) {
    e = uniform_unit(rng) < p_quiet ? kQuiet : 1 + uniform_below(rng, static_cast<std::uint32_t>(c));
  }
  return StrategyTable(std::move(entries));
}

// Standard error of a Bernoulli frequency estimate.
inline double bernoulli_se(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace anticoord::testing
