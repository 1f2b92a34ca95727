#include <string>

#include "anticoord/errors.hpp"
#include "anticoord/experiments.hpp"

namespace anticoord {

namespace {

constexpr std::uint64_t kDynamicHorizon = 100'000;

std::string tag(std::string_view fig, const std::string& detail) {
  return std::string(fig) + "/" + detail;
}

ScenarioConfig static_config(std::string id, std::size_t n, std::size_t c, std::size_t k) {
  ScenarioConfig cfg;
  cfg.scenario_id = std::move(id);
  cfg.kind = ScenarioKind::kStatic;
  cfg.shape = {n, c, k};
  return cfg;
}

const BackoffKind kAllSchemes[] = {BackoffKind::kConstant, BackoffKind::kLinear,
                                   BackoffKind::kExponential, BackoffKind::kWorstLast};
const BackoffKind kAdaptiveSchemes[] = {BackoffKind::kConstant, BackoffKind::kLinear,
                                        BackoffKind::kWorstLast};
const double kRestartGrid[] = {0.0, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
const double kNoiseGrid[] = {0.0, 1e-4, 1e-3, 1e-2, 1e-1};

std::vector<ScenarioConfig> fig01() {
  std::vector<ScenarioConfig> out;
  for (std::size_t c = 1; c <= 64; c *= 2) {
    out.push_back(static_config(tag("fig01", "C=" + std::to_string(c)), 64, c, 64));
  }
  return out;
}

std::vector<ScenarioConfig> fig02() {
  std::vector<ScenarioConfig> out;
  for (std::size_t k = 2; k <= 64; k += 2) {
    out.push_back(static_config(tag("fig02", "K=" + std::to_string(k)), 64, 32, k));
  }
  return out;
}

std::vector<ScenarioConfig> fig03() {
  std::vector<ScenarioConfig> out;
  for (std::size_t n = 2; n <= 64; n *= 2) {
    const std::size_t lg = ceil_log2(n);
    const std::string at = ";N=" + std::to_string(n);
    out.push_back(static_config(tag("fig03", "C=1;K=N" + at), n, 1, n));
    out.push_back(static_config(tag("fig03", "C=1;K=NlogN" + at), n, 1, n * lg));
    out.push_back(static_config(tag("fig03", "C=N/2;K=2" + at), n, n / 2, 2));
    out.push_back(static_config(tag("fig03", "C=N/2;K=2logN" + at), n, n / 2, 2 * lg));
  }
  return out;
}

// fig04 and fig05 share their runs: fairness and convergence time of each
// back-off scheme at C = N/2, K = 2 log2 N.
std::vector<ScenarioConfig> schemes(std::string_view fig) {
  std::vector<ScenarioConfig> out;
  for (std::size_t n = 4; n <= 64; n *= 2) {
    for (BackoffKind b : kAllSchemes) {
      auto cfg = static_config(
          tag(fig, to_string(b) + ";N=" + std::to_string(n)), n, n / 2, 2 * ceil_log2(n));
      cfg.backoff = b;
      out.push_back(cfg);
    }
  }
  return out;
}

std::vector<ScenarioConfig> joining(std::string_view fig, bool one_channel) {
  std::vector<ScenarioConfig> out;
  for (std::size_t n = 8; n <= 32; n *= 2) {
    for (InitSelector init : {InitSelector::kGreedy, InitSelector::kPolite}) {
      for (BackoffKind b : kAdaptiveSchemes) {
        const std::size_t lg = ceil_log2(n);
        ScenarioConfig cfg;
        cfg.scenario_id = tag(fig, to_string(init) + ";" + to_string(b) + ";N=" + std::to_string(n));
        cfg.kind = ScenarioKind::kJoining;
        cfg.shape = one_channel ? GameShape{n, 1, n * lg} : GameShape{n, n / 2, 2 * lg};
        cfg.backoff = b;
        cfg.init = init;
        cfg.join_plan = JoinPlan{};
        out.push_back(cfg);
      }
    }
  }
  return out;
}

std::vector<ScenarioConfig> restarting(std::string_view fig, bool one_channel) {
  constexpr std::size_t n = 32;
  const std::size_t lg = ceil_log2(n);
  const std::size_t c = one_channel ? 1 : n / 2;
  const std::size_t ks[2] = {one_channel ? n * lg : lg, one_channel ? n : 2};
  std::vector<ScenarioConfig> out;
  for (std::size_t k : ks) {
    for (InitSelector init : {InitSelector::kGreedy, InitSelector::kPolite}) {
      for (BackoffKind b : kAdaptiveSchemes) {
        for (double pr : kRestartGrid) {
          ScenarioConfig cfg;
          cfg.scenario_id = tag(fig, to_string(init) + ";" + to_string(b) + ";K=" +
                                         std::to_string(k) + ";pR=" + format_value(pr));
          cfg.kind = ScenarioKind::kRestarting;
          cfg.shape = {n, c, k};
          cfg.backoff = b;
          cfg.init = init;
          cfg.restart_prob = pr;
          cfg.horizon = kDynamicHorizon;
          out.push_back(cfg);
        }
      }
    }
  }
  ScenarioConfig baseline;
  baseline.scenario_id = tag(fig, "random-access");
  baseline.kind = ScenarioKind::kRandomAccess;
  baseline.shape = {n, c, 1};
  baseline.horizon = kDynamicHorizon;
  out.push_back(baseline);
  return out;
}

std::vector<ScenarioConfig> noisy(std::string_view fig, bool feedback) {
  constexpr std::size_t n = 32;
  const std::size_t lg = ceil_log2(n);
  std::vector<ScenarioConfig> out;
  for (std::size_t c : {std::size_t{1}, n / 2}) {
    for (BackoffKind b : kAdaptiveSchemes) {
      for (double p : kNoiseGrid) {
        ScenarioConfig cfg;
        cfg.scenario_id = tag(fig, to_string(b) + ";C=" + std::to_string(c) +
                                       (feedback ? ";pF=" : ";pS=") + format_value(p));
        cfg.kind = ScenarioKind::kNoisy;
        cfg.shape = c == 1 ? GameShape{n, 1, n * lg} : GameShape{n, c, 2 * lg};
        cfg.backoff = b;
        (feedback ? cfg.noise.p_feedback : cfg.noise.p_signal) = p;
        cfg.horizon = kDynamicHorizon;
        out.push_back(cfg);
      }
    }
  }
  return out;
}

// fig16 and fig17: the regret learners against the back-off learner, all
// on the K = 1 game with one channel.
std::vector<ScenarioConfig> learners(std::string_view fig) {
  std::vector<ScenarioConfig> out;
  for (std::size_t n = 2; n <= 16; n *= 2) {
    for (ScenarioKind kind : {ScenarioKind::kRegretMatching, ScenarioKind::kPolynomialWeights,
                              ScenarioKind::kStatic}) {
      ScenarioConfig cfg;
      cfg.scenario_id = tag(fig, to_string(kind) + ";N=" + std::to_string(n));
      cfg.kind = kind;
      cfg.shape = {n, 1, 1};
      out.push_back(cfg);
    }
  }
  return out;
}

struct Preset {
  const char* name;
  const char* description;
  std::vector<ScenarioConfig> (*build)();
};

const Preset kPresets[] = {
    {"fig01", "convergence steps, N=64, K=N, C in {1,2,4,...,64}", fig01},
    {"fig02", "convergence steps, N=64, C=N/2, K in {2,...,64}", fig02},
    {"fig03", "Jain index (predicted and empirical) for C in {1,N/2} and several K, increasing N",
     fig03},
    {"fig04", "Jain index per back-off scheme, C=N/2, K=2log2N", [] { return schemes("fig04"); }},
    {"fig05", "convergence steps per back-off scheme, C=N/2, K=2log2N",
     [] { return schemes("fig05"); }},
    {"fig06", "joining agents, Jain index, C=1, K=Nlog2N", [] { return joining("fig06", true); }},
    {"fig07", "joining agents, group fairness, C=1, K=Nlog2N",
     [] { return joining("fig07", true); }},
    {"fig08", "joining agents, Jain index, C=N/2, K=2log2N",
     [] { return joining("fig08", false); }},
    {"fig09", "joining agents, group fairness, C=N/2, K=2log2N",
     [] { return joining("fig09", false); }},
    {"fig10", "restarting agents, throughput, N=32, C=1",
     [] { return restarting("fig10", true); }},
    {"fig11", "restarting agents, throughput, N=32, C=N/2",
     [] { return restarting("fig11", false); }},
    {"fig12", "noisy feedback, throughput, N=32", [] { return noisy("fig12", true); }},
    {"fig13", "noisy feedback, Jain index, N=32", [] { return noisy("fig13", true); }},
    {"fig14", "noisy signal, throughput, N=32", [] { return noisy("fig14", false); }},
    {"fig15", "noisy signal, Jain index, N=32", [] { return noisy("fig15", false); }},
    {"fig16", "regret learners vs back-off learner, rounds to converge, K=1, C=1",
     [] { return learners("fig16"); }},
    {"fig17", "regret learners vs back-off learner, Jain index, K=1, C=1",
     [] { return learners("fig17"); }},
};

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : kPresets) out.push_back({p.name, p.description});
  return out;
}

std::vector<ScenarioConfig> preset_scenarios(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return p.build();
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (see `anticoord presets`)");
}

}  // namespace anticoord
