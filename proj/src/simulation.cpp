#include "anticoord/simulation.hpp"

#include <algorithm>
#include <utility>

#include "anticoord/errors.hpp"

namespace anticoord {

ChannelSimulation::ChannelSimulation(SimulationParams params, std::vector<StrategyTable> initial,
                                     Rng rng)
    : params_(std::move(params)),
      tables_(std::move(initial)),
      rng_(std::move(rng)),
      signals_(params_.shape.n_signals, params_.signal_mode) {
  const auto& shape = params_.shape;
  if (shape.n_channels == 0 || shape.n_signals == 0) {
    throw ConfigError("simulation needs at least one channel and one signal");
  }
  validate(params_.scheme);
  validate(params_.restart_init);
  params_.noise.validate();
  if (!(params_.restart_prob >= 0.0 && params_.restart_prob <= 1.0)) {
    throw ConfigError("restart probability must lie in [0,1]");
  }
  owners_.assign(shape.n_signals * shape.n_channels, 0);
  for (const auto& table : tables_) {
    table.validate(shape.n_signals, shape.n_channels);
    count_table(table, +1);
  }
}

ChannelSimulation ChannelSimulation::create(SimulationParams params, const InitMode& init,
                                            std::size_t population, Rng rng) {
  std::vector<StrategyTable> tables;
  tables.reserve(population);
  for (std::size_t i = 0; i < population; ++i) {
    tables.push_back(init_strategy(init, params.shape, rng));
  }
  return ChannelSimulation(std::move(params), std::move(tables), std::move(rng));
}

void ChannelSimulation::count_cell(Signal k, Channel c, int delta) {
  auto& n = owners_[k * params_.shape.n_channels + (c - 1)];
  if (delta > 0) {
    if (n == 0) ++owned_cells_;
    if (n == 1) ++contested_cells_;
    ++n;
  } else {
    if (n == 2) --contested_cells_;
    if (n == 1) --owned_cells_;
    --n;
  }
}

void ChannelSimulation::count_table(const StrategyTable& table, int delta) {
  for (std::size_t k = 0; k < table.size(); ++k) {
    const Channel c = table[static_cast<Signal>(k)];
    if (c != kQuiet) count_cell(static_cast<Signal>(k), c, delta);
  }
}

void ChannelSimulation::write_entry(std::size_t agent, Signal k, Channel c) {
  const Channel old = tables_[agent][k];
  if (old == c) return;
  if (old != kQuiet) count_cell(k, old, -1);
  if (c != kQuiet) count_cell(k, c, +1);
  tables_[agent].set(k, c);
}

bool ChannelSimulation::converged() const {
  if (tables_.empty()) return false;
  const std::size_t per_signal = std::min(params_.shape.n_channels, tables_.size());
  return contested_cells_ == 0 && owned_cells_ == per_signal * params_.shape.n_signals;
}

void ChannelSimulation::add_agent(StrategyTable table) {
  table.validate(params_.shape.n_signals, params_.shape.n_channels);
  count_table(table, +1);
  tables_.push_back(std::move(table));
}

std::vector<std::size_t> ChannelSimulation::allocation() const {
  std::vector<std::size_t> alloc;
  alloc.reserve(tables_.size());
  for (const auto& t : tables_) alloc.push_back(t.cardinality());
  return alloc;
}

void ChannelSimulation::resolve_worst_agent_last_collisions() {
  for (const auto& transmitters : outcome_.transmitters_per_channel) {
    colliders_.clear();
    for (std::size_t agent : transmitters) {
      if (received_[agent] == Observation::kTxCollision) {
        colliders_.push_back({agent, cardinalities_[agent]});
      }
    }
    // A lone perceived collider is trivially the lowest-cardinality one and keeps its entry.
    if (colliders_.size() < 2) continue;
    for (std::size_t agent : resolve_worst_agent_last(colliders_, rng_)) {
      write_entry(agent, perceived_[agent], kQuiet);
    }
  }
}

SlotReport ChannelSimulation::step() {
  const auto& shape = params_.shape;
  const auto& noise = params_.noise;
  const std::size_t n = tables_.size();
  const bool worst_last = std::holds_alternative<WorstAgentLast>(params_.scheme);

  const Signal k = signals_.next(rng_);

  perceived_.resize(n);
  actions_.resize(n);
  received_.resize(n);
  cardinalities_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    perceived_[i] = noise.p_signal > 0.0 ? perturb_signal(k, shape, noise, rng_) : k;
  }
  for (std::size_t i = 0; i < n; ++i) {
    actions_[i] = choose_action(tables_[i], perceived_[i], shape.n_channels, rng_);
    cardinalities_[i] = tables_[i].cardinality();
  }

  resolve_slot_into(actions_, shape.n_channels, outcome_);

  for (std::size_t i = 0; i < n; ++i) {
    received_[i] = apply_feedback_noise(outcome_.observations[i], noise, rng_);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Observation obs = received_[i];
    if (worst_last && obs == Observation::kTxCollision) continue;
    const Signal own = perceived_[i];
    const Channel before = tables_[i][own];
    StrategyTable& table = tables_[i];
    apply_update(table, own, actions_[i], obs, params_.scheme, shape, rng_);
    const Channel after = table[own];
    if (after != before) {
      // Re-apply through write_entry so the ownership counts follow.
      table.set(own, before);
      write_entry(i, own, after);
    }
  }
  if (worst_last) resolve_worst_agent_last_collisions();

  SlotReport report{k, outcome_.successes(), outcome_.collisions()};

  if (observer_) {
    observer_(SlotView{slot_, k, perceived_, actions_, outcome_, received_, cardinalities_});
  }

  if (params_.restart_prob > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!bernoulli(rng_, params_.restart_prob)) continue;
      StrategyTable fresh = init_strategy(params_.restart_init, shape, rng_);
      count_table(tables_[i], -1);
      count_table(fresh, +1);
      tables_[i] = std::move(fresh);
    }
  }

  ++slot_;
  return report;
}

}  // namespace anticoord
