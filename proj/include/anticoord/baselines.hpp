#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "anticoord/rng.hpp"

namespace anticoord::baselines {

// One-shot channel game with K = 1. Action 0 is Quiet, action c in 1..C
// transmits on channel c.
using Action = std::size_t;
inline constexpr Action kQuietAction = 0;

using Profile = std::vector<Action>;

struct ChannelGamePayoff {
  double collision_cost = 1.0;

  void validate() const;
};

struct ActionSet {
  std::size_t n_channels = 1;
  std::size_t size() const { return n_channels + 1; }
};

// Transmitting alone pays 1, colliding pays -c, staying quiet pays 0.
std::vector<double> payoff(std::span<const Action> profile, std::size_t n_channels,
                           const ChannelGamePayoff& cost);

// Payoff agent `agent` would have received for each of its actions with the
// opponents' actions in `profile` held fixed.
std::vector<double> counterfactual_payoffs(std::span<const Action> profile, std::size_t agent,
                                           std::size_t n_channels, const ChannelGamePayoff& cost);

// (1 - payoff) / (1 + c): 1 -> 0, -c -> 1.
double normalized_loss(double payoff_value, const ChannelGamePayoff& cost);

bool collision_free_and_covering(std::span<const Action> profile, std::size_t n_channels);

// --- Regret matching -------------------------------------------------------

// cumulative[a * n + b] sums, over the rounds in which a was played, the
// payoff gain of having played b instead.
struct RegretState {
  std::size_t n_actions = 2;
  std::vector<double> cumulative;
  std::uint64_t round = 0;
  Action last_action = 0;

  explicit RegretState(std::size_t actions = 2)
      : n_actions(actions), cumulative(actions * actions, 0.0) {}

  double average(Action a, Action b) const;
  void record(Action played, std::span<const double> payoffs_by_action);
};

double default_inertia(std::size_t n_channels, const ChannelGamePayoff& cost);

// Distribution over actions for the next round. Round 0 is uniform; later
// rounds move to b != last with probability max(0, avg regret)/inertia.
// Throws ConfigError if the switching mass would exceed 1.
std::vector<double> regret_matching_distribution(const RegretState& state, double inertia);

Action regret_matching_step(const RegretState& state, double inertia, Rng& rng);

// --- Polynomial weights with the internal-regret reduction -----------------

// w'_a = w_a (1 - eta * loss_a). Losses must lie in [0,1].
std::vector<double> pw_update(std::span<const double> weights, std::span<const double> losses,
                              double eta);

// One weight vector per action-copy instance.
struct WeightState {
  std::vector<std::vector<double>> weights;
  double eta = 0.1;

  static WeightState uniform(std::size_t n_actions, double eta);
  std::vector<std::vector<double>> instance_distributions() const;
};

// p with p = p Q where row a of Q is instance a's distribution. Lazy
// fixed-point iteration p <- (p + pQ)/2 until the L1 change is below
// `tolerance`; throws NumericalError when `max_iterations` is reached.
std::vector<double> combine_internal(const std::vector<std::vector<double>>& instance_distributions,
                                     std::optional<std::vector<double>> initial = std::nullopt,
                                     double tolerance = 1e-10,
                                     std::size_t max_iterations = 1'000'000);

// Instance a's normalized loss vector is scaled by last_combined[a] before
// its polynomial-weights update.
WeightState update_pw_internal(WeightState state, std::span<const double> realized_payoffs,
                               std::span<const double> last_combined,
                               const ChannelGamePayoff& cost);

// --- Regret audit ----------------------------------------------------------

// Largest average gain, over ordered pairs (a, b), from replacing every past
// play of a by b. The a == b pair contributes 0, so the result is >= 0.
double max_internal_regret(std::span<const Profile> play_history, std::size_t n_channels,
                           const ChannelGamePayoff& cost, std::size_t agent);

// Incremental version of max_internal_regret for long runs.
class InternalRegretAudit {
 public:
  InternalRegretAudit(std::size_t n_agents, std::size_t n_channels, ChannelGamePayoff cost);

  void record(std::span<const Action> profile);
  void reset();
  std::uint64_t rounds() const { return rounds_; }
  double max_regret(std::size_t agent) const;
  double max_regret_all() const;

 private:
  std::size_t n_agents_;
  std::size_t n_channels_;
  ChannelGamePayoff cost_;
  std::vector<RegretState> states_;
  std::uint64_t rounds_ = 0;
};

// --- Learners --------------------------------------------------------------

class RegretMatchingLearner {
 public:
  RegretMatchingLearner(std::size_t n_channels, const ChannelGamePayoff& cost);
  RegretMatchingLearner(std::size_t n_channels, double inertia);

  Action act(Rng& rng) const;
  void observe(Action played, std::span<const double> payoffs_by_action);
  const RegretState& state() const { return state_; }

 private:
  RegretState state_;
  double inertia_;
};

class PolynomialWeightsLearner {
 public:
  PolynomialWeightsLearner(std::size_t n_channels, double eta, ChannelGamePayoff cost);

  Action act(Rng& rng);
  void observe(std::span<const double> payoffs_by_action);
  const std::vector<double>& combined() const { return combined_; }
  const WeightState& weights() const { return state_; }

 private:
  WeightState state_;
  ChannelGamePayoff cost_;
  std::vector<double> combined_;
};

Action sample(std::span<const double> distribution, Rng& rng);

}  // namespace anticoord::baselines
