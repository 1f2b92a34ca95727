#include "anticoord/game.hpp"

#include <algorithm>
#include <string>

#include "anticoord/errors.hpp"

namespace anticoord {

void GameShape::validate() const {
  if (n_agents == 0 || n_channels == 0 || n_signals == 0) {
    throw ConfigError("game shape needs positive agents, channels and signals");
  }
  if (n_channels > n_agents) {
    throw ConfigError("channels (" + std::to_string(n_channels) + ") exceed agents (" +
                      std::to_string(n_agents) + ")");
  }
}

Observation flipped(Observation obs) {
  switch (obs) {
    case Observation::kTxSuccess: return Observation::kTxCollision;
    case Observation::kTxCollision: return Observation::kTxSuccess;
    case Observation::kChannelFree: return Observation::kChannelBusy;
    case Observation::kChannelBusy: return Observation::kChannelFree;
  }
  return obs;
}

bool follows_transmit(Observation obs) {
  return obs == Observation::kTxSuccess || obs == Observation::kTxCollision;
}

const char* to_string(Observation obs) {
  switch (obs) {
    case Observation::kTxSuccess: return "tx-success";
    case Observation::kTxCollision: return "tx-collision";
    case Observation::kChannelFree: return "channel-free";
    case Observation::kChannelBusy: return "channel-busy";
  }
  return "?";
}

std::size_t SlotOutcome::successes() const {
  return static_cast<std::size_t>(std::count_if(
      transmitters_per_channel.begin(), transmitters_per_channel.end(),
      [](const auto& set) { return set.size() == 1; }));
}

std::size_t SlotOutcome::collisions() const {
  return static_cast<std::size_t>(std::count_if(
      transmitters_per_channel.begin(), transmitters_per_channel.end(),
      [](const auto& set) { return set.size() >= 2; }));
}

void NoiseParams::validate() const {
  if (!(p_feedback >= 0.0 && p_feedback <= 1.0)) {
    throw ConfigError("feedback noise probability must lie in [0,1]");
  }
  if (!(p_signal >= 0.0 && p_signal <= 1.0)) {
    throw ConfigError("signal noise probability must lie in [0,1]");
  }
}

void resolve_slot_into(std::span<const AgentAction> actions, std::size_t n_channels,
                       SlotOutcome& out) {
  out.transmitters_per_channel.resize(n_channels);
  for (auto& set : out.transmitters_per_channel) set.clear();
  out.observations.resize(actions.size());

  for (std::size_t i = 0; i < actions.size(); ++i) {
    const Channel c = actions[i].channel;
    if (c < 1 || c > n_channels) {
      throw ConfigError("agent " + std::to_string(i) + " addressed channel " + std::to_string(c) +
                        " outside 1.." + std::to_string(n_channels));
    }
    if (actions[i].transmits()) out.transmitters_per_channel[c - 1].push_back(i);
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::size_t on_channel = out.transmitters_per_channel[actions[i].channel - 1].size();
    if (actions[i].transmits()) {
      out.observations[i] = on_channel == 1 ? Observation::kTxSuccess : Observation::kTxCollision;
    } else {
      out.observations[i] = on_channel == 0 ? Observation::kChannelFree : Observation::kChannelBusy;
    }
  }
}

SlotOutcome resolve_slot(std::span<const AgentAction> actions, const GameShape& shape) {
  SlotOutcome out;
  resolve_slot_into(actions, shape.n_channels, out);
  return out;
}

Observation apply_feedback_noise(Observation obs, const NoiseParams& noise, Rng& rng) {
  return bernoulli(rng, noise.p_feedback) ? flipped(obs) : obs;
}

Signal draw_signal(const GameShape& shape, Rng& rng) {
  if (shape.n_signals <= 1) return 0;
  return uniform_below(rng, static_cast<std::uint32_t>(shape.n_signals));
}

Signal perturb_signal(Signal true_signal, const GameShape& shape, const NoiseParams& noise,
                      Rng& rng) {
  if (shape.n_signals <= 1) return 0;
  if (!bernoulli(rng, noise.p_signal)) return true_signal;
  const auto k = static_cast<std::uint32_t>(shape.n_signals);
  if (noise.signal_support == SignalNoiseSupport::kFull) return uniform_below(rng, k);
  // Uniform over the K-1 values other than the true one.
  const Signal draw = uniform_below(rng, k - 1);
  return draw >= true_signal ? draw + 1 : draw;
}

bool is_converged(std::span<const StrategyTable> strategies, const GameShape& shape) {
  const std::size_t c_count = shape.n_channels;
  const std::size_t required = std::min(c_count, strategies.size());
  std::vector<std::size_t> owners(c_count);
  for (std::size_t k = 0; k < shape.n_signals; ++k) {
    std::fill(owners.begin(), owners.end(), 0);
    for (const auto& table : strategies) {
      const Channel c = table[static_cast<Signal>(k)];
      if (c != kQuiet) ++owners[c - 1];
    }
    std::size_t owned = 0;
    for (std::size_t n : owners) {
      if (n > 1) return false;
      owned += n;
    }
    if (owned != required) return false;
  }
  return true;
}

Signal SignalSource::next(Rng& rng) {
  if (n_signals_ <= 1) return 0;
  if (mode_ == SignalMode::kRoundRobin) {
    const Signal k = cursor_;
    cursor_ = static_cast<Signal>((cursor_ + 1) % n_signals_);
    return k;
  }
  return uniform_below(rng, static_cast<std::uint32_t>(n_signals_));
}

}  // namespace anticoord
