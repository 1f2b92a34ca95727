#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "anticoord/agents.hpp"
#include "anticoord/game.hpp"
#include "anticoord/rng.hpp"

namespace anticoord {

struct SimulationParams {
  // n_agents is the nominal population used for validation; the live
  // population may differ (joining scenarios grow it one agent at a time).
  GameShape shape;
  BackoffScheme scheme = ConstantBackoff{};
  NoiseParams noise;
  SignalMode signal_mode = SignalMode::kIid;
  double restart_prob = 0.0;
  InitMode restart_init = GreedyInit{};
};

struct SlotReport {
  Signal signal = 0;
  std::size_t successes = 0;   // channels with exactly one transmitter
  std::size_t collisions = 0;  // channels with two or more
};

// Everything that happened in one slot; handed to the optional observer.
struct SlotView {
  std::uint64_t slot = 0;
  Signal true_signal = 0;
  std::span<const Signal> perceived_signals;
  std::span<const AgentAction> actions;
  const SlotOutcome& outcome;
  std::span<const Observation> received;  // after feedback noise
  std::span<const std::size_t> cardinalities_before;
};

// The slotted channel-allocation process driven by the learning agents.
//
// Per slot: draw the public signal, let each agent perceive it (possibly
// wrongly), act, resolve collisions, deliver (possibly flipped) feedback,
// update strategies, then restart agents for the next slot.
//
// Channel ownership counts per (signal, channel) are maintained incrementally
// so that converged() is O(1).
class ChannelSimulation {
 public:
  ChannelSimulation(SimulationParams params, std::vector<StrategyTable> initial, Rng rng);

  // Convenience: `population` agents initialised with `init`, drawing from `rng`.
  static ChannelSimulation create(SimulationParams params, const InitMode& init,
                                  std::size_t population, Rng rng);

  SlotReport step();

  void add_agent(StrategyTable table);

  bool converged() const;
  std::size_t population() const { return tables_.size(); }
  std::uint64_t slot() const { return slot_; }
  const SimulationParams& params() const { return params_; }
  const std::vector<StrategyTable>& strategies() const { return tables_; }
  std::vector<std::size_t> allocation() const;
  Rng& rng() { return rng_; }

  using Observer = std::function<void(const SlotView&)>;
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  void count_table(const StrategyTable& table, int delta);
  void count_cell(Signal k, Channel c, int delta);
  void write_entry(std::size_t agent, Signal k, Channel c);
  void resolve_worst_agent_last_collisions();

  SimulationParams params_;
  std::vector<StrategyTable> tables_;
  Rng rng_;
  SignalSource signals_;
  std::uint64_t slot_ = 0;

  std::vector<std::uint32_t> owners_;  // [k * C + (c - 1)]
  std::size_t owned_cells_ = 0;
  std::size_t contested_cells_ = 0;

  std::vector<Signal> perceived_;
  std::vector<AgentAction> actions_;
  std::vector<Observation> received_;
  std::vector<std::size_t> cardinalities_;
  SlotOutcome outcome_;
  std::vector<Collider> colliders_;
  Observer observer_;
};

}  // namespace anticoord
