#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "anticoord/rng.hpp"
#include "anticoord/strategy.hpp"

namespace anticoord {

// N agents, C channels, K coordination-signal values.
struct GameShape {
  std::size_t n_agents = 1;
  std::size_t n_channels = 1;
  std::size_t n_signals = 1;

  // Requires all counts positive and C <= N.
  void validate() const;
  bool operator==(const GameShape&) const = default;
};

struct AgentAction {
  enum class Kind { kTransmit, kMonitor };
  Kind kind = Kind::kMonitor;
  Channel channel = 1;

  static AgentAction transmit(Channel c) { return {Kind::kTransmit, c}; }
  static AgentAction monitor(Channel c) { return {Kind::kMonitor, c}; }
  bool transmits() const { return kind == Kind::kTransmit; }
  bool operator==(const AgentAction&) const = default;
};

enum class Observation { kTxSuccess, kTxCollision, kChannelFree, kChannelBusy };

// The other member of the observation's pair (success/collision, free/busy).
Observation flipped(Observation obs);
bool follows_transmit(Observation obs);
const char* to_string(Observation obs);

struct SlotOutcome {
  // Index c-1 holds the agents that transmitted on channel c.
  std::vector<std::vector<std::size_t>> transmitters_per_channel;
  std::vector<Observation> observations;

  std::size_t successes() const;  // channels with exactly one transmitter
  std::size_t collisions() const;  // channels with two or more
};

// What happens to the false signal when an agent mis-observes the public one.
enum class SignalNoiseSupport { kFull, kOthersOnly };

struct NoiseParams {
  double p_feedback = 0.0;
  double p_signal = 0.0;
  SignalNoiseSupport signal_support = SignalNoiseSupport::kFull;

  void validate() const;
  bool operator==(const NoiseParams&) const = default;
};

SlotOutcome resolve_slot(std::span<const AgentAction> actions, const GameShape& shape);

// Allocation-free variant used in the simulation hot loop; `out` is reused.
void resolve_slot_into(std::span<const AgentAction> actions, std::size_t n_channels,
                       SlotOutcome& out);

Observation apply_feedback_noise(Observation obs, const NoiseParams& noise, Rng& rng);

Signal draw_signal(const GameShape& shape, Rng& rng);

Signal perturb_signal(Signal true_signal, const GameShape& shape, const NoiseParams& noise,
                      Rng& rng);

// True iff for every signal value each channel has at most one owner and the
// number of owned channels is min(C, number of tables). With C <= N this is
// "exactly one owner per channel per signal", the absorbing state of the
// learner.
bool is_converged(std::span<const StrategyTable> strategies, const GameShape& shape);

enum class SignalMode { kIid, kRoundRobin };

class SignalSource {
 public:
  SignalSource(std::size_t n_signals, SignalMode mode) : n_signals_(n_signals), mode_(mode) {}
  Signal next(Rng& rng);

 private:
  std::size_t n_signals_;
  SignalMode mode_;
  Signal cursor_ = 0;
};

}  // namespace anticoord
