#include "anticoord/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "json.hpp"

#include "anticoord/baselines.hpp"
#include "anticoord/errors.hpp"
#include "anticoord/rng.hpp"
#include "anticoord/simulation.hpp"

namespace anticoord {

using nlohmann::json;

// --- Names -----------------------------------------------------------------

namespace {

template <class Enum, std::size_t N>
Enum lookup(std::string_view name, const std::pair<std::string_view, Enum> (&table)[N],
            std::string_view what) {
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  std::string allowed;
  for (const auto& [key, value] : table) {
    if (!allowed.empty()) allowed += '|';
    allowed += key;
  }
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(name) + "' (expected " +
                    allowed + ")");
}

template <class Enum, std::size_t N>
std::string name_of(Enum value, const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [key, v] : table) {
    if (v == value) return std::string(key);
  }
  return "?";
}

constexpr std::pair<std::string_view, ScenarioKind> kKinds[] = {
    {"static", ScenarioKind::kStatic},
    {"joining", ScenarioKind::kJoining},
    {"restarting", ScenarioKind::kRestarting},
    {"noisy", ScenarioKind::kNoisy},
    {"regret-matching", ScenarioKind::kRegretMatching},
    {"polynomial-weights", ScenarioKind::kPolynomialWeights},
    {"random-access", ScenarioKind::kRandomAccess},
};

constexpr std::pair<std::string_view, BackoffKind> kBackoffs[] = {
    {"constant", BackoffKind::kConstant},
    {"linear", BackoffKind::kLinear},
    {"exponential", BackoffKind::kExponential},
    {"worst-last", BackoffKind::kWorstLast},
};

constexpr std::pair<std::string_view, InitSelector> kInits[] = {
    {"random", InitSelector::kRandom},
    {"greedy", InitSelector::kGreedy},
    {"polite", InitSelector::kPolite},
};

constexpr std::pair<std::string_view, ExponentialForm> kExpForms[] = {
    {"literal", ExponentialForm::kLiteral},
    {"exponent", ExponentialForm::kExponent},
};

constexpr std::pair<std::string_view, SignalMode> kSignalModes[] = {
    {"iid", SignalMode::kIid},
    {"roundrobin", SignalMode::kRoundRobin},
};

constexpr std::pair<std::string_view, SignalNoiseSupport> kSignalSupports[] = {
    {"full", SignalNoiseSupport::kFull},
    {"others", SignalNoiseSupport::kOthersOnly},
};

}  // namespace

ScenarioKind parse_kind(std::string_view name) { return lookup(name, kKinds, "scenario kind"); }
BackoffKind parse_backoff(std::string_view name) { return lookup(name, kBackoffs, "back-off scheme"); }
InitSelector parse_init(std::string_view name) { return lookup(name, kInits, "init mode"); }
ExponentialForm parse_exp_form(std::string_view name) {
  return lookup(name, kExpForms, "exponential form");
}
SignalMode parse_signal_mode(std::string_view name) {
  return lookup(name, kSignalModes, "signal mode");
}
std::string to_string(ScenarioKind kind) { return name_of(kind, kKinds); }
std::string to_string(BackoffKind kind) { return name_of(kind, kBackoffs); }
std::string to_string(InitSelector init) { return name_of(init, kInits); }

// --- Config ----------------------------------------------------------------

BackoffScheme ScenarioConfig::scheme() const {
  switch (backoff) {
    case BackoffKind::kConstant: return ConstantBackoff{backoff_p};
    case BackoffKind::kLinear: return LinearBackoff{};
    case BackoffKind::kExponential: return ExponentialBackoff{mu, exp_form};
    case BackoffKind::kWorstLast: return WorstAgentLast{};
  }
  return ConstantBackoff{backoff_p};
}

void ScenarioConfig::validate() const {
  shape.validate();
  anticoord::validate(scheme());
  noise.validate();
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (!(restart_prob >= 0.0 && restart_prob <= 1.0)) {
    throw ConfigError("restart probability must lie in [0,1]");
  }
  if (!(collision_cost >= 0.0)) throw ConfigError("collision cost must be >= 0");
  if (!(pw_eta > 0.0 && pw_eta < 1.0)) throw ConfigError("learning rate must lie in (0,1)");
  if (stable_window < 1) throw ConfigError("stable window must be >= 1");
  if (join_plan) {
    if (!(join_plan->initial_fraction > 0.0 && join_plan->initial_fraction <= 1.0)) {
      throw ConfigError("initial join fraction must lie in (0,1]");
    }
    if (join_plan->phase_horizon < 1) throw ConfigError("phase horizon must be >= 1");
  }
  const bool noisy = noise.p_feedback > 0.0 || noise.p_signal > 0.0;
  switch (kind) {
    case ScenarioKind::kStatic:
      if (restart_prob > 0.0 || join_plan || noisy) {
        throw ConfigError("static scenarios take no restarts, joiners or noise");
      }
      break;
    case ScenarioKind::kJoining:
      if (!join_plan) throw ConfigError("joining scenario needs a join plan");
      if (shape.n_agents < 4) throw ConfigError("joining scenario needs at least 4 agents");
      break;
    case ScenarioKind::kRegretMatching:
    case ScenarioKind::kPolynomialWeights:
      if (shape.n_signals != 1) throw ConfigError("baseline learners play the K = 1 game");
      break;
    case ScenarioKind::kRestarting:
    case ScenarioKind::kNoisy:
    case ScenarioKind::kRandomAccess:
      break;
  }
}

std::string param_json(const ScenarioConfig& c) {
  json j;  // std::map-backed: keys come out sorted
  j["kind"] = to_string(c.kind);
  j["agents"] = c.shape.n_agents;
  j["channels"] = c.shape.n_channels;
  j["signals"] = c.shape.n_signals;
  j["backoff"] = to_string(c.backoff);
  j["p"] = c.backoff_p;
  j["mu"] = c.mu;
  j["exp_form"] = name_of(c.exp_form, kExpForms);
  j["init"] = to_string(c.init);
  j["p_restart"] = c.restart_prob;
  j["p_feedback"] = c.noise.p_feedback;
  j["p_signal"] = c.noise.p_signal;
  j["signal_noise"] = name_of(c.noise.signal_support, kSignalSupports);
  j["signal_mode"] = name_of(c.signal_mode, kSignalModes);
  j["horizon"] = c.horizon;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["collision_cost"] = c.collision_cost;
  j["eta"] = c.pw_eta;
  j["inertia"] = baselines::default_inertia(c.shape.n_channels, {c.collision_cost});
  j["stable_window"] = c.stable_window;
  if (c.join_plan) {
    j["join_fraction"] = c.join_plan->initial_fraction;
    j["phase_horizon"] = c.join_plan->phase_horizon;
  }
  j["rng"] = std::string(kRngAlgorithm);
  return j.dump();
}

void apply_config_json(ScenarioConfig& c, std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "scenario") c.scenario_id = value.get<std::string>();
      else if (key == "kind") c.kind = parse_kind(value.get<std::string>());
      else if (key == "agents") c.shape.n_agents = value.get<std::size_t>();
      else if (key == "channels") c.shape.n_channels = value.get<std::size_t>();
      else if (key == "signals") c.shape.n_signals = value.get<std::size_t>();
      else if (key == "backoff") c.backoff = parse_backoff(value.get<std::string>());
      else if (key == "p") c.backoff_p = value.get<double>();
      else if (key == "mu") c.mu = value.get<double>();
      else if (key == "exp-form") c.exp_form = parse_exp_form(value.get<std::string>());
      else if (key == "init") c.init = parse_init(value.get<std::string>());
      else if (key == "p-restart") c.restart_prob = value.get<double>();
      else if (key == "p-feedback") c.noise.p_feedback = value.get<double>();
      else if (key == "p-signal") c.noise.p_signal = value.get<double>();
      else if (key == "signal-noise") c.noise.signal_support = lookup(value.get<std::string>(), kSignalSupports, "signal noise support");
      else if (key == "signal-mode") c.signal_mode = parse_signal_mode(value.get<std::string>());
      else if (key == "collision-cost") c.collision_cost = value.get<double>();
      else if (key == "eta") c.pw_eta = value.get<double>();
      else if (key == "window") c.stable_window = value.get<std::size_t>();
      else if (key == "runs") c.runs = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "horizon") c.horizon = value.get<std::uint64_t>();
      else if (key == "join-fraction") {
        if (!c.join_plan) c.join_plan = JoinPlan{};
        c.join_plan->initial_fraction = value.get<double>();
      } else if (key == "phase-horizon") {
        if (!c.join_plan) c.join_plan = JoinPlan{};
        c.join_plan->phase_horizon = value.get<std::uint64_t>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (c.kind == ScenarioKind::kJoining && !c.join_plan) c.join_plan = JoinPlan{};
}

// --- Runners ---------------------------------------------------------------

std::size_t worker_count() {
  if (const char* env = std::getenv("ANTICOORD_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t ceil_log2(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

namespace {

InitMode initial_mode(const ScenarioConfig& c) {
  switch (c.init) {
    case InitSelector::kGreedy: return GreedyInit{};
    case InitSelector::kPolite:
      return PoliteInit{c.shape.n_agents, PoliteRule::kChannelsOverPopulation};
    case InitSelector::kRandom: break;
  }
  return RandomChannelInit{};
}

SimulationParams simulation_params(const ScenarioConfig& c) {
  SimulationParams p;
  p.shape = c.shape;
  p.scheme = c.scheme();
  p.noise = c.noise;
  p.signal_mode = c.signal_mode;
  return p;
}

std::uint64_t run_until_converged(ChannelSimulation& sim, std::uint64_t horizon) {
  std::uint64_t steps = 0;
  while (!sim.converged() && steps < horizon) {
    sim.step();
    ++steps;
  }
  return steps;
}

}  // namespace

StaticRun run_static_once(const ScenarioConfig& config, std::size_t run) {
  const std::uint64_t seed = derive_seed(config.seed, run);
  auto sim = ChannelSimulation::create(simulation_params(config), initial_mode(config),
                                       config.shape.n_agents, make_rng(seed));
  const std::uint64_t steps = run_until_converged(sim, config.horizon);
  return {seed, steps, sim.converged(), sim.allocation()};
}

JoiningRun run_joining_once(const ScenarioConfig& config, std::size_t run) {
  const std::uint64_t seed = derive_seed(config.seed, run);
  const JoinPlan plan = config.join_plan.value_or(JoinPlan{});
  const std::size_t n = config.shape.n_agents;
  const auto initial = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(plan.initial_fraction * static_cast<double>(n))), 1, n);

  auto sim = ChannelSimulation::create(simulation_params(config), RandomChannelInit{}, initial,
                                       make_rng(seed));
  JoiningRun result;
  result.seed = seed;
  result.converged = true;
  auto phase = [&] {
    result.total_slots += run_until_converged(sim, plan.phase_horizon);
    if (!sim.converged()) result.converged = false;
  };
  phase();
  while (sim.population() < n) {
    InitMode joiner = RandomChannelInit{};
    if (config.init == InitSelector::kGreedy) joiner = GreedyInit{};
    if (config.init == InitSelector::kPolite) {
      joiner = PoliteInit{sim.population(), PoliteRule::kOneOverPopulation};
    }
    sim.add_agent(init_strategy(joiner, config.shape, sim.rng()));
    phase();
  }

  result.allocation = sim.allocation();
  const double k = static_cast<double>(config.shape.n_signals);
  std::vector<std::size_t> join_order(n);
  for (std::size_t i = 0; i < n; ++i) {
    join_order[i] = i;
    result.per_agent_throughput.push_back(static_cast<double>(result.allocation[i]) / k);
  }
  try {
    result.group_fairness = group_fairness(result.per_agent_throughput, join_order);
  } catch (const UndefinedInput&) {
    result.group_fairness = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

RestartingRun run_restarting_once(const ScenarioConfig& config, std::size_t run) {
  const std::uint64_t seed = derive_seed(config.seed, run);
  SimulationParams params = simulation_params(config);
  params.restart_prob = config.restart_prob;
  params.restart_init = initial_mode(config);
  auto sim = ChannelSimulation::create(params, RandomChannelInit{}, config.shape.n_agents,
                                       make_rng(seed));
  ThroughputWindow window;
  for (std::uint64_t t = 0; t < config.horizon; ++t) window.successes += sim.step().successes;
  window.slots = config.horizon;
  return {seed, throughput(window, config.shape)};
}

NoisyRun run_noisy_once(const ScenarioConfig& config, std::size_t run) {
  const std::uint64_t seed = derive_seed(config.seed, run);
  auto sim = ChannelSimulation::create(simulation_params(config), initial_mode(config),
                                       config.shape.n_agents, make_rng(seed));
  ThroughputWindow window;
  for (std::uint64_t t = 0; t < config.horizon; ++t) window.successes += sim.step().successes;
  window.slots = config.horizon;
  NoisyRun result{seed, throughput(window, config.shape), std::nullopt};
  try {
    result.jain_allocation = jain_allocation(sim.allocation());
  } catch (const UndefinedInput&) {
  }
  return result;
}

RestartingRun run_random_access_once(const ScenarioConfig& config, std::size_t run) {
  const std::uint64_t seed = derive_seed(config.seed, run);
  Rng rng = make_rng(seed);
  const auto& shape = config.shape;
  const double p = static_cast<double>(shape.n_channels) / static_cast<double>(shape.n_agents);
  std::vector<std::size_t> load(shape.n_channels);
  ThroughputWindow window;
  for (std::uint64_t t = 0; t < config.horizon; ++t) {
    std::fill(load.begin(), load.end(), 0);
    for (std::size_t i = 0; i < shape.n_agents; ++i) {
      if (bernoulli(rng, p)) ++load[uniform_below(rng, static_cast<std::uint32_t>(shape.n_channels))];
    }
    window.successes += static_cast<std::uint64_t>(std::count(load.begin(), load.end(), 1));
  }
  window.slots = config.horizon;
  return {seed, throughput(window, shape)};
}

BaselineRun run_baseline_once(const ScenarioConfig& config, BaselineLearner learner,
                              std::size_t run) {
  using namespace baselines;
  if (config.shape.n_signals != 1) throw ConfigError("baseline learners play the K = 1 game");
  const std::uint64_t seed = derive_seed(config.seed, run);
  Rng rng = make_rng(seed);
  const std::size_t n = config.shape.n_agents;
  const std::size_t c = config.shape.n_channels;
  const ChannelGamePayoff cost{config.collision_cost};

  std::vector<RegretMatchingLearner> rm;
  std::vector<PolynomialWeightsLearner> pw;
  for (std::size_t i = 0; i < n; ++i) {
    if (learner == BaselineLearner::kRegretMatching) {
      rm.emplace_back(c, cost);
    } else {
      pw.emplace_back(c, config.pw_eta, cost);
    }
  }

  InternalRegretAudit full(n, c, cost);
  InternalRegretAudit window(n, c, cost);
  Profile profile(n);
  BaselineRun result;
  result.seed = seed;
  std::uint64_t stable = 0;
  std::uint64_t next_trace = 1;
  std::uint64_t t = 0;
  for (; t < config.horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      profile[i] = learner == BaselineLearner::kRegretMatching ? rm[i].act(rng) : pw[i].act(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto payoffs = counterfactual_payoffs(profile, i, c, cost);
      if (learner == BaselineLearner::kRegretMatching) {
        rm[i].observe(profile[i], payoffs);
      } else {
        pw[i].observe(payoffs);
      }
    }
    full.record(profile);
    if (collision_free_and_covering(profile, c)) {
      if (stable == 0) window.reset();
      window.record(profile);
      ++stable;
    } else {
      stable = 0;
    }
    if (t + 1 == next_trace) {
      result.regret_trace.emplace_back(t + 1, full.max_regret_all());
      next_trace *= 2;
    }
    if (stable == config.stable_window) {
      result.converged = true;
      result.rounds_to_converge = t + 1 - stable;
      result.max_internal_regret = window.max_regret_all();
      ++t;
      break;
    }
  }
  if (!result.converged) {
    result.rounds_to_converge = t;
    result.max_internal_regret = full.max_regret_all();
  }
  if (result.regret_trace.empty() || result.regret_trace.back().first != t) {
    result.regret_trace.emplace_back(t, full.max_regret_all());
  }
  for (Action a : profile) result.allocation.push_back(a == kQuietAction ? 0 : 1);
  return result;
}

std::vector<StaticRun> run_static(const ScenarioConfig& config) {
  config.validate();
  return replicate<StaticRun>(config.runs, [&](std::size_t r) { return run_static_once(config, r); });
}

std::vector<JoiningRun> run_joining(const ScenarioConfig& config) {
  config.validate();
  return replicate<JoiningRun>(config.runs,
                               [&](std::size_t r) { return run_joining_once(config, r); });
}

std::vector<RestartingRun> run_restarting(const ScenarioConfig& config) {
  config.validate();
  return replicate<RestartingRun>(config.runs,
                                  [&](std::size_t r) { return run_restarting_once(config, r); });
}

std::vector<NoisyRun> run_noisy(const ScenarioConfig& config) {
  config.validate();
  return replicate<NoisyRun>(config.runs, [&](std::size_t r) { return run_noisy_once(config, r); });
}

std::vector<BaselineRun> run_baselines(const ScenarioConfig& config, BaselineLearner learner) {
  config.validate();
  return replicate<BaselineRun>(
      config.runs, [&](std::size_t r) { return run_baseline_once(config, learner, r); });
}

std::vector<RestartingRun> run_random_access(const ScenarioConfig& config) {
  config.validate();
  return replicate<RestartingRun>(config.runs,
                                  [&](std::size_t r) { return run_random_access_once(config, r); });
}

std::vector<MetricRecord> run_scenario(const ScenarioConfig& config) {
  config.validate();
  const std::string params = param_json(config);
  std::vector<MetricRecord> records;
  auto emit = [&](std::size_t run, std::uint64_t seed, std::string_view metric, double value) {
    records.push_back({config.scenario_id, run, seed, params, std::string(metric), value});
  };
  auto emit_jain = [&](std::size_t run, std::uint64_t seed, const AllocationVector& alloc) {
    try {
      emit(run, seed, "jain_allocation", jain_allocation(alloc));
    } catch (const UndefinedInput&) {
    }
  };

  switch (config.kind) {
    case ScenarioKind::kStatic: {
      const auto runs = run_static(config);
      const double analytic = jain_binomial(config.shape);
      for (std::size_t r = 0; r < runs.size(); ++r) {
        emit(r, runs[r].seed, "convergence_steps", static_cast<double>(runs[r].convergence_steps));
        emit(r, runs[r].seed, "converged_flag", runs[r].converged ? 1.0 : 0.0);
        emit_jain(r, runs[r].seed, runs[r].allocation);
        emit(r, runs[r].seed, "jain_binomial", analytic);
      }
      break;
    }
    case ScenarioKind::kJoining: {
      const auto runs = run_joining(config);
      for (std::size_t r = 0; r < runs.size(); ++r) {
        emit(r, runs[r].seed, "convergence_steps", static_cast<double>(runs[r].total_slots));
        emit(r, runs[r].seed, "converged_flag", runs[r].converged ? 1.0 : 0.0);
        emit(r, runs[r].seed, "group_fairness", runs[r].group_fairness);
        emit_jain(r, runs[r].seed, runs[r].allocation);
      }
      break;
    }
    case ScenarioKind::kRestarting: {
      const auto runs = run_restarting(config);
      for (std::size_t r = 0; r < runs.size(); ++r) emit(r, runs[r].seed, "throughput", runs[r].throughput);
      break;
    }
    case ScenarioKind::kRandomAccess: {
      const auto runs = run_random_access(config);
      for (std::size_t r = 0; r < runs.size(); ++r) emit(r, runs[r].seed, "throughput", runs[r].throughput);
      break;
    }
    case ScenarioKind::kNoisy: {
      const auto runs = run_noisy(config);
      for (std::size_t r = 0; r < runs.size(); ++r) {
        emit(r, runs[r].seed, "throughput", runs[r].throughput);
        if (runs[r].jain_allocation) emit(r, runs[r].seed, "jain_allocation", *runs[r].jain_allocation);
      }
      break;
    }
    case ScenarioKind::kRegretMatching:
    case ScenarioKind::kPolynomialWeights: {
      const auto learner = config.kind == ScenarioKind::kRegretMatching
                               ? BaselineLearner::kRegretMatching
                               : BaselineLearner::kPolynomialWeights;
      const auto runs = run_baselines(config, learner);
      for (std::size_t r = 0; r < runs.size(); ++r) {
        emit(r, runs[r].seed, "convergence_steps", static_cast<double>(runs[r].rounds_to_converge));
        emit(r, runs[r].seed, "converged_flag", runs[r].converged ? 1.0 : 0.0);
        emit_jain(r, runs[r].seed, runs[r].allocation);
        emit(r, runs[r].seed, "max_internal_regret", runs[r].max_internal_regret);
      }
      break;
    }
  }
  return records;
}

}  // namespace anticoord
