#include "anticoord/agents.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anticoord/errors.hpp"

namespace anticoord {

StrategyTable::StrategyTable(std::vector<Channel> entries) : entries_(std::move(entries)) {
  cardinality_ = static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](Channel c) { return c != kQuiet; }));
}

void StrategyTable::set(Signal k, Channel c) {
  Channel& slot = entries_[k];
  if (slot == kQuiet && c != kQuiet) ++cardinality_;
  if (slot != kQuiet && c == kQuiet) --cardinality_;
  slot = c;
}

void StrategyTable::validate(std::size_t n_signals, std::size_t n_channels) const {
  if (entries_.size() != n_signals) {
    throw ConfigError("strategy table has " + std::to_string(entries_.size()) +
                      " entries, expected " + std::to_string(n_signals));
  }
  for (Channel c : entries_) {
    if (c > n_channels) throw ConfigError("strategy entry " + std::to_string(c) + " out of range");
  }
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Channel random_channel(std::size_t n_channels, Rng& rng) {
  return uniform_below(rng, static_cast<std::uint32_t>(n_channels)) + 1;
}

}  // namespace

void validate(const BackoffScheme& scheme) {
  std::visit(Overloaded{
                 [](const ConstantBackoff& s) {
                   if (!(s.p > 0.0 && s.p < 1.0)) {
                     throw ConfigError("constant back-off probability must lie in (0,1)");
                   }
                 },
                 [](const ExponentialBackoff& s) {
                   if (!(s.mu > 0.0 && s.mu < 1.0)) {
                     throw ConfigError("exponential back-off mu must lie in (0,1)");
                   }
                 },
                 [](const auto&) {},
             },
             scheme);
}

std::string scheme_name(const BackoffScheme& scheme) {
  return std::visit(Overloaded{
                        [](const ConstantBackoff&) -> std::string { return "constant"; },
                        [](const LinearBackoff&) -> std::string { return "linear"; },
                        [](const ExponentialBackoff&) -> std::string { return "exponential"; },
                        [](const WorstAgentLast&) -> std::string { return "worst-last"; },
                    },
                    scheme);
}

double PoliteInit::transmit_probability(std::size_t n_channels) const {
  const double n = static_cast<double>(known_population);
  const double p = rule == PoliteRule::kOneOverPopulation ? 1.0 / n
                                                          : static_cast<double>(n_channels) / n;
  return std::min(1.0, p);
}

void validate(const InitMode& mode) {
  if (const auto* polite = std::get_if<PoliteInit>(&mode)) {
    if (polite->known_population < 1) throw ConfigError("polite init needs a population >= 1");
  }
}

StrategyTable init_strategy(const InitMode& mode, const GameShape& shape, Rng& rng) {
  std::vector<Channel> entries(shape.n_signals, kQuiet);
  if (const auto* polite = std::get_if<PoliteInit>(&mode)) {
    const double p = polite->transmit_probability(shape.n_channels);
    for (auto& e : entries) {
      if (bernoulli(rng, p)) e = random_channel(shape.n_channels, rng);
    }
  } else {
    for (auto& e : entries) e = random_channel(shape.n_channels, rng);
  }
  return StrategyTable(std::move(entries));
}

AgentAction choose_action(const StrategyTable& strategy, Signal observed_signal,
                          std::size_t n_channels, Rng& rng) {
  const Channel c = strategy[observed_signal];
  if (c != kQuiet) return AgentAction::transmit(c);
  return AgentAction::monitor(n_channels == 1 ? 1 : random_channel(n_channels, rng));
}

double backoff_probability(const BackoffScheme& scheme, std::size_t card, const GameShape& shape) {
  if (card > shape.n_signals) {
    throw ContractViolation("cardinality exceeds the number of signals");
  }
  const double share = static_cast<double>(card) / static_cast<double>(shape.n_signals);
  return std::visit(
      Overloaded{
          [](const ConstantBackoff& s) { return s.p; },
          [&](const LinearBackoff&) { return share; },
          [&](const ExponentialBackoff& s) {
            return s.form == ExponentialForm::kLiteral ? s.mu * (1.0 - share)
                                                       : std::pow(s.mu, 1.0 - share);
          },
          [](const WorstAgentLast&) -> double {
            throw UnsupportedScheme(
                "worst-agent-last has no per-agent back-off probability; use "
                "resolve_worst_agent_last");
          },
      },
      scheme);
}

void apply_update(StrategyTable& strategy, Signal signal, const AgentAction& action,
                  Observation obs, const BackoffScheme& scheme, const GameShape& shape, Rng& rng) {
  if (action.transmits() != follows_transmit(obs)) {
    throw ContractViolation(std::string("observation ") + to_string(obs) +
                            " does not match the action taken");
  }
  switch (obs) {
    case Observation::kTxSuccess:
    case Observation::kChannelBusy:
      return;
    case Observation::kTxCollision:
      if (bernoulli(rng, backoff_probability(scheme, strategy.cardinality(), shape))) {
        strategy.set(signal, kQuiet);
      }
      return;
    case Observation::kChannelFree:
      strategy.set(signal, action.channel);
      return;
  }
}

StrategyTable update_strategy(StrategyTable strategy, Signal signal, const AgentAction& action,
                              Observation obs, const BackoffScheme& scheme,
                              const GameShape& shape, Rng& rng) {
  apply_update(strategy, signal, action, obs, scheme, shape, rng);
  return strategy;
}

std::vector<std::size_t> resolve_worst_agent_last(std::span<const Collider> colliders, Rng& rng) {
  if (colliders.size() < 2) {
    throw ContractViolation("worst-agent-last needs at least two colliders");
  }
  std::size_t lowest = colliders[0].cardinality;
  for (const auto& c : colliders) lowest = std::min(lowest, c.cardinality);

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < colliders.size(); ++i) {
    if (colliders[i].cardinality == lowest) candidates.push_back(i);
  }
  const std::size_t survivor =
      candidates.size() == 1
          ? candidates.front()
          : candidates[uniform_below(rng, static_cast<std::uint32_t>(candidates.size()))];

  std::vector<std::size_t> backing_off;
  backing_off.reserve(colliders.size() - 1);
  for (std::size_t i = 0; i < colliders.size(); ++i) {
    if (i != survivor) backing_off.push_back(colliders[i].agent);
  }
  return backing_off;
}

}  // namespace anticoord
