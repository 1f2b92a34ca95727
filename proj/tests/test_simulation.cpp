#include "doctest.h"

#include <map>
#include <utility>
#include <vector>

#include "anticoord/metrics.hpp"
#include "anticoord/simulation.hpp"
#include "support.hpp"

using namespace anticoord;

namespace {

SimulationParams params_for(GameShape shape, BackoffScheme scheme = ConstantBackoff{}) {
  SimulationParams p;
  p.shape = shape;
  p.scheme = scheme;
  return p;
}

}  // namespace

TEST_CASE("a single agent converges within one slot") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto sim = ChannelSimulation::create(params_for({1, 1, 1}), RandomChannelInit{}, 1, make_rng(seed));
    std::uint64_t steps = 0;
    while (!sim.converged() && steps < 10) {
      sim.step();
      ++steps;
    }
    CHECK(steps <= 1);
    CHECK(sim.converged());
  }
}

TEST_CASE("incremental convergence flag agrees with full inspection") {
  testing::for_cases(17, 200, [](Rng& rng, std::size_t) {
    const std::size_t n = testing::draw_between(rng, 1, 8);
    const std::size_t c = testing::draw_between(rng, 1, n);
    const std::size_t k = testing::draw_between(rng, 1, 6);
    const GameShape shape{n, c, k};
    std::vector<StrategyTable> tables;
    for (std::size_t i = 0; i < n; ++i) tables.push_back(testing::random_table(rng, k, c, 0.4));
    ChannelSimulation sim(params_for(shape), tables, make_rng(rng()));
    for (int t = 0; t < 60; ++t) {
      CHECK(sim.converged() == is_converged(sim.strategies(), shape));
      sim.step();
    }
  });
}

TEST_CASE("worst-agent-last resolves every collision in one step") {
  const GameShape shape{16, 4, 6};
  auto sim = ChannelSimulation::create(params_for(shape, WorstAgentLast{}), RandomChannelInit{},
                                       shape.n_agents, make_rng(21));
  std::map<std::pair<Signal, Channel>, bool> pending;
  std::size_t collision_events = 0;
  std::size_t checked = 0;
  sim.set_observer([&](const SlotView& view) {
    for (Channel c = 1; c <= shape.n_channels; ++c) {
      const auto& tx = view.outcome.transmitters_per_channel[c - 1];
      auto key = std::make_pair(view.true_signal, c);
      if (pending[key]) {
        CHECK(tx.size() <= 1);
        ++checked;
        pending[key] = false;
      }
      if (tx.size() >= 2) {
        pending[key] = true;
        ++collision_events;
      }
    }
  });
  for (int t = 0; t < 2000 && !sim.converged(); ++t) sim.step();
  CHECK(collision_events > 0);
  CHECK(checked > 0);
  CHECK(sim.converged());
}

TEST_CASE("converged allocation sums to C K") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GameShape shape{10, 3, 7};
    auto sim = ChannelSimulation::create(params_for(shape), RandomChannelInit{}, 10, make_rng(seed));
    while (!sim.converged()) sim.step();
    std::size_t total = 0;
    for (auto x : sim.allocation()) total += x;
    CHECK(total == 21);
  }
}

TEST_CASE("agents win a signal with probability C / N") {
  // Pooled per-agent win indicators over converged runs.
  const GameShape shape{8, 2, 16};
  std::size_t wins = 0;
  std::size_t trials = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto sim = ChannelSimulation::create(params_for(shape), RandomChannelInit{}, 8, make_rng(seed));
    while (!sim.converged()) sim.step();
    for (auto x : sim.allocation()) wins += x;
    trials += shape.n_agents * shape.n_signals;
  }
  const double freq = static_cast<double>(wins) / trials;
  CHECK(std::abs(freq - 0.25) <= 3 * testing::bernoulli_se(0.25, trials));
}

TEST_CASE("a late joiner is counted in the allocation") {
  const GameShape shape{4, 1, 4};
  auto sim = ChannelSimulation::create(params_for(shape), RandomChannelInit{}, 2, make_rng(3));
  while (!sim.converged()) sim.step();
  sim.add_agent(StrategyTable({1, 1, 1, 1}));
  CHECK(sim.population() == 3);
  CHECK_FALSE(sim.converged());
  while (!sim.converged()) sim.step();
  CHECK(sim.allocation().size() == 3);
}

TEST_CASE("restarts disturb a converged system") {
  auto p = params_for({8, 1, 8});
  p.restart_prob = 0.2;
  auto sim = ChannelSimulation::create(p, RandomChannelInit{}, 8, make_rng(4));
  std::size_t collisions = 0;
  for (int t = 0; t < 2000; ++t) collisions += sim.step().collisions;
  CHECK(collisions > 1000);
}
