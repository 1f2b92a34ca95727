#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anticoord/agents.hpp"
#include "anticoord/game.hpp"
#include "anticoord/metrics.hpp"
#include "anticoord/records.hpp"

namespace anticoord {

enum class ScenarioKind {
  kStatic,
  kJoining,
  kRestarting,
  kNoisy,
  kRegretMatching,
  kPolynomialWeights,
  kRandomAccess,
};

enum class BackoffKind { kConstant, kLinear, kExponential, kWorstLast };

// Which initialization the scenario uses for fresh strategies. The concrete
// InitMode depends on the scenario: polite joiners transmit with probability
// 1/N(t), polite restarters with C/N.
enum class InitSelector { kRandom, kGreedy, kPolite };

struct JoinPlan {
  double initial_fraction = 0.25;  // ceil(fraction * N) agents start, the rest arrive one by one
  std::uint64_t phase_horizon = 100'000;
};

struct ScenarioConfig {
  std::string scenario_id = "custom";
  ScenarioKind kind = ScenarioKind::kStatic;
  GameShape shape{8, 1, 8};

  BackoffKind backoff = BackoffKind::kConstant;
  double backoff_p = 0.5;
  double mu = 0.5;
  ExponentialForm exp_form = ExponentialForm::kExponent;

  InitSelector init = InitSelector::kRandom;
  NoiseParams noise;
  SignalMode signal_mode = SignalMode::kIid;
  double restart_prob = 0.0;
  std::optional<JoinPlan> join_plan;

  std::uint64_t horizon = 1'000'000;
  std::size_t runs = 128;
  std::uint64_t seed = 1;

  double collision_cost = 1.0;
  double pw_eta = 0.1;
  std::size_t stable_window = 100;

  BackoffScheme scheme() const;
  void validate() const;
};

// Canonical key-sorted JSON snapshot of every parameter, including derived
// defaults and the RNG algorithm.
std::string param_json(const ScenarioConfig& config);

// Applies a JSON object whose keys are the CLI long option names
// ("agents", "backoff", "p-restart", ...). Throws ConfigError.
void apply_config_json(ScenarioConfig& config, std::string_view json_text);

ScenarioKind parse_kind(std::string_view name);
BackoffKind parse_backoff(std::string_view name);
InitSelector parse_init(std::string_view name);
ExponentialForm parse_exp_form(std::string_view name);
SignalMode parse_signal_mode(std::string_view name);
std::string to_string(ScenarioKind kind);
std::string to_string(BackoffKind kind);
std::string to_string(InitSelector init);

// --- Per-run results -------------------------------------------------------

struct StaticRun {
  std::uint64_t seed = 0;
  std::uint64_t convergence_steps = 0;
  bool converged = false;
  AllocationVector allocation;
};

struct JoiningRun {
  std::uint64_t seed = 0;
  AllocationVector allocation;
  std::vector<double> per_agent_throughput;  // long-run share X_i / K, indexed by join order
  double group_fairness = 0.0;
  bool converged = false;                    // every phase converged within its horizon
  std::uint64_t total_slots = 0;
};

struct RestartingRun {
  std::uint64_t seed = 0;
  double throughput = 0.0;
};

struct NoisyRun {
  std::uint64_t seed = 0;
  double throughput = 0.0;
  std::optional<double> jain_allocation;  // empty when the final allocation is all quiet
};

struct BaselineRun {
  std::uint64_t seed = 0;
  std::uint64_t rounds_to_converge = 0;  // first round of the stable window
  bool converged = false;
  AllocationVector allocation;           // 1 for agents transmitting in the stable profile
  double max_internal_regret = 0.0;      // over the stable window, max across agents
  // (round, full-history max internal regret across agents) at powers of two
  // and at the end of the run.
  std::vector<std::pair<std::uint64_t, double>> regret_trace;
};

enum class BaselineLearner { kRegretMatching, kPolynomialWeights };

StaticRun run_static_once(const ScenarioConfig& config, std::size_t run);
JoiningRun run_joining_once(const ScenarioConfig& config, std::size_t run);
RestartingRun run_restarting_once(const ScenarioConfig& config, std::size_t run);
NoisyRun run_noisy_once(const ScenarioConfig& config, std::size_t run);
BaselineRun run_baseline_once(const ScenarioConfig& config, BaselineLearner learner, std::size_t run);
RestartingRun run_random_access_once(const ScenarioConfig& config, std::size_t run);

std::vector<StaticRun> run_static(const ScenarioConfig& config);
std::vector<JoiningRun> run_joining(const ScenarioConfig& config);
std::vector<RestartingRun> run_restarting(const ScenarioConfig& config);
std::vector<NoisyRun> run_noisy(const ScenarioConfig& config);
std::vector<BaselineRun> run_baselines(const ScenarioConfig& config, BaselineLearner learner);
std::vector<RestartingRun> run_random_access(const ScenarioConfig& config);

// Dispatches on config.kind and flattens the results into metric records.
std::vector<MetricRecord> run_scenario(const ScenarioConfig& config);

// Runs fn(0..runs-1) on a worker pool; results are stored by run index so the
// output does not depend on scheduling.
std::size_t worker_count();

template <class Result>
std::vector<Result> replicate(std::size_t runs, const std::function<Result(std::size_t)>& fn) {
  std::vector<Result> results(runs);
  const std::size_t workers = std::min(worker_count(), runs);
  if (workers <= 1) {
    for (std::size_t r = 0; r < runs; ++r) results[r] = fn(r);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < runs; r = next++) {
        try {
          results[r] = fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

// --- Presets ---------------------------------------------------------------

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();

// Throws ConfigError for an unknown name.
std::vector<ScenarioConfig> preset_scenarios(std::string_view name);

// ceil(log2(n)) for n >= 1.
std::size_t ceil_log2(std::size_t n);

}  // namespace anticoord
