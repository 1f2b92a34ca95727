#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace anticoord {

// Every run owns one generator; per-run seeds come from derive_seed so that
// adding replications never perturbs earlier ones.
using Rng = std::mt19937_64;

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64";

std::uint64_t splitmix64(std::uint64_t& state);

// Seed for replication `stream` of a scenario with master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Draws nothing when p is 0 or 1, so zero-probability features leave the
// random stream untouched.
bool bernoulli(Rng& rng, double p);

// Uniform integer in [0, n). n must be positive.
std::uint32_t uniform_below(Rng& rng, std::uint32_t n);

double uniform_unit(Rng& rng);

}  // namespace anticoord
