#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "anticoord/rng.hpp"

namespace anticoord::markov {

// Chains over {0..N} counting how many agents still transmit on a single
// channel with a single signal value.
enum class ChainVariant {
  kOriginal,              // 0 -> N (everyone re-claims), 1 absorbing, binomial otherwise
  kModifiedY,             // 0 absorbing, binomial from every i >= 1
  kAbsorbedAtZeroAndOne,  // 0 and 1 absorbing, binomial otherwise
};

struct ChainModel {
  std::size_t n_agents = 2;
  double backoff_p = 0.5;
  ChainVariant variant = ChainVariant::kOriginal;

  void validate() const;
  std::size_t n_states() const { return n_agents + 1; }
};

// Values over states 0..N. Unreachable hitting times are +infinity.
struct HittingResult {
  std::vector<double> values;

  double operator[](std::size_t i) const { return values[i]; }
};

// Binomial(i, 1-p) probabilities of ending in state j (j <= i): each of the i
// transmitters keeps its entry with probability 1-p.
std::vector<double> binomial_row(std::size_t i, double backoff_p, std::size_t n_states);

std::vector<double> transition_row(std::size_t state, const ChainModel& model);

std::vector<std::vector<double>> transition_matrix(const ChainModel& model);

// Minimal non-negative solution of k_i = 0 (i in A), k_i = 1 + sum_{j not in A} p_ij k_j.
HittingResult expected_hitting_time(const ChainModel& model, std::span<const std::size_t> targets);

// Minimal non-negative solution of h_i = 1 (i in A), h_i = sum_j p_ij h_j.
HittingResult hitting_probability(const ChainModel& model, std::span<const std::size_t> targets);

// ceil(log_beta(i)) + beta / (beta - 1); beta > 1, i >= 1.
double rego_bound(double beta, std::size_t start_state);

// Upper bound on the expected steps to a single transmitter from N:
// rego_bound(1/(1-p), N) / (1-p).
double theorem5_bound(std::size_t n_agents, double backoff_p);

// h_i >= 1-p for every 2 <= i <= N, where h is the probability of reaching 1
// before 0.
bool verify_lemma7(std::size_t n_agents, double backoff_p);

// Closed-form growth evaluators for C >= 1 and K >= 1 (unit constants). For
// reporting only; the multi-channel process is not modelled exactly.
double multichannel_bound(std::size_t n_agents, std::size_t n_channels, double backoff_p);
double multisignal_bound(std::size_t n_agents, std::size_t n_channels, std::size_t n_signals,
                         double backoff_p);

// Expected steps until all of K independently-selected copies of a chain with
// mean absorption time T are absorbed: T K ln K + 2 T K + 1.
double coupon_collector_bound(double single_chain_time, std::size_t n_signals);

// Monte-Carlo sample of the hitting time of `targets` from `start`; stops at
// `cap` steps and returns cap in that case.
std::uint64_t sample_hitting_time(const ChainModel& model, std::size_t start,
                                  std::span<const std::size_t> targets, Rng& rng,
                                  std::uint64_t cap = 100'000'000);

}  // namespace anticoord::markov
