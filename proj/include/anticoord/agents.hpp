#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "anticoord/game.hpp"
#include "anticoord/rng.hpp"
#include "anticoord/strategy.hpp"

namespace anticoord {

// Back-off variants: how likely a colliding agent is to give up the entry for
// the current signal.

struct ConstantBackoff {
  double p = 0.5;
};

// p = cardinality / K
struct LinearBackoff {};

enum class ExponentialForm {
  kLiteral,   // p = mu * (1 - card/K)
  kExponent,  // p = mu ^ (1 - card/K)
};

struct ExponentialBackoff {
  double mu = 0.5;
  ExponentialForm form = ExponentialForm::kExponent;
};

// Among the colliders on a channel, the one with the lowest cardinality keeps
// transmitting and every other collider backs off. Needs a global view, so the
// simulator resolves it rather than the agent.
struct WorstAgentLast {};

using BackoffScheme = std::variant<ConstantBackoff, LinearBackoff, ExponentialBackoff, WorstAgentLast>;

void validate(const BackoffScheme& scheme);
std::string scheme_name(const BackoffScheme& scheme);

// Initialization of a fresh strategy table.

struct RandomChannelInit {};
// Transmits for every signal on a random channel; same draw as RandomChannelInit.
struct GreedyInit {};

enum class PoliteRule {
  kChannelsOverPopulation,  // transmit probability C / n (restarting players)
  kOneOverPopulation,       // transmit probability 1 / n (joining players)
};

struct PoliteInit {
  std::size_t known_population = 1;
  PoliteRule rule = PoliteRule::kChannelsOverPopulation;

  double transmit_probability(std::size_t n_channels) const;
};

using InitMode = std::variant<RandomChannelInit, GreedyInit, PoliteInit>;

void validate(const InitMode& mode);

StrategyTable init_strategy(const InitMode& mode, const GameShape& shape, Rng& rng);

AgentAction choose_action(const StrategyTable& strategy, Signal observed_signal,
                          std::size_t n_channels, Rng& rng);

inline std::size_t cardinality(const StrategyTable& strategy) { return strategy.cardinality(); }

// Throws UnsupportedScheme for WorstAgentLast.
double backoff_probability(const BackoffScheme& scheme, std::size_t card, const GameShape& shape);

// In-place learning step. Only the entry at `signal` can change.
void apply_update(StrategyTable& strategy, Signal signal, const AgentAction& action,
                  Observation obs, const BackoffScheme& scheme, const GameShape& shape, Rng& rng);

StrategyTable update_strategy(StrategyTable strategy, Signal signal, const AgentAction& action,
                              Observation obs, const BackoffScheme& scheme,
                              const GameShape& shape, Rng& rng);

struct Collider {
  std::size_t agent = 0;
  std::size_t cardinality = 0;
};

// Returns the agents that back off: every collider except one survivor of
// minimal cardinality (ties broken uniformly). Requires at least two colliders.
std::vector<std::size_t> resolve_worst_agent_last(std::span<const Collider> colliders, Rng& rng);

}  // namespace anticoord
