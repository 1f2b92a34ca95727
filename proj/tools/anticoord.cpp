// Command-line driver: run scenarios or presets, list presets, and check the
// simulator against the exact Markov chain.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anticoord/errors.hpp"
#include "anticoord/experiments.hpp"
#include "anticoord/markov.hpp"
#include "anticoord/metrics.hpp"
#include "anticoord/records.hpp"
#include "anticoord/rng.hpp"

namespace {

using namespace anticoord;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

enum class ValueType { kString, kUnsigned, kReal };

struct FlagSpec {
  const char* name;
  ValueType type;
  const char* help;
};

// Every flag maps onto the config-file key of the same name.
const FlagSpec kFlags[] = {
    {"kind", ValueType::kString,
     "static|joining|restarting|noisy|regret-matching|polynomial-weights|random-access"},
    {"agents", ValueType::kUnsigned, "number of agents N"},
    {"channels", ValueType::kUnsigned, "number of channels C"},
    {"signals", ValueType::kUnsigned, "number of coordination signals K"},
    {"backoff", ValueType::kString, "constant|linear|exponential|worst-last"},
    {"p", ValueType::kReal, "constant back-off probability"},
    {"mu", ValueType::kReal, "exponential back-off base"},
    {"exp-form", ValueType::kString, "literal|exponent"},
    {"init", ValueType::kString, "random|greedy|polite"},
    {"p-restart", ValueType::kReal, "per-agent restart probability per slot"},
    {"p-feedback", ValueType::kReal, "feedback flip probability"},
    {"p-signal", ValueType::kReal, "signal misperception probability"},
    {"signal-noise", ValueType::kString, "full|others: support of a misperceived signal"},
    {"signal-mode", ValueType::kString, "iid|roundrobin"},
    {"collision-cost", ValueType::kReal, "collision cost c of the one-shot game"},
    {"eta", ValueType::kReal, "polynomial weights learning rate"},
    {"window", ValueType::kUnsigned, "collision-free rounds that count as converged"},
    {"join-fraction", ValueType::kReal, "fraction of agents present at the start"},
    {"phase-horizon", ValueType::kUnsigned, "slot cap per joining phase"},
    {"runs", ValueType::kUnsigned, "replications"},
    {"seed", ValueType::kUnsigned, "master seed"},
    {"horizon", ValueType::kUnsigned, "slot cap per run"},
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

nlohmann::json flag_overrides(const std::map<std::string, std::string>& given) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& spec : kFlags) {
    auto it = given.find(spec.name);
    if (it == given.end()) continue;
    const std::string& raw = it->second;
    try {
      std::size_t used = 0;
      switch (spec.type) {
        case ValueType::kString: j[spec.name] = raw; continue;
        case ValueType::kUnsigned:
          if (!raw.empty() && raw[0] == '-') throw std::invalid_argument(raw);
          j[spec.name] = std::stoull(raw, &used);
          break;
        case ValueType::kReal: j[spec.name] = std::stod(raw, &used); break;
      }
      if (used != raw.size()) throw std::invalid_argument(raw);
    } catch (const std::logic_error&) {
      throw ConfigError("bad value '" + raw + "' for --" + spec.name);
    }
  }
  return j;
}

std::string summary_path_for(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".summary.csv";
  }
  return out + ".summary.csv";
}

// Fitted exponent of mean convergence steps against K for the fig02 sweep.
void report_growth(const std::vector<ScenarioConfig>& configs,
                   const std::vector<SummaryRow>& summary) {
  std::vector<double> ks;
  std::vector<double> steps;
  for (const auto& cfg : configs) {
    for (const auto& row : summary) {
      if (row.scenario_id == cfg.scenario_id && row.metric == "convergence_steps") {
        ks.push_back(static_cast<double>(cfg.shape.n_signals));
        steps.push_back(row.mean);
      }
    }
  }
  if (ks.size() >= 2) {
    std::cout << "fitted exponent of convergence steps in K: "
              << format_value(log_log_slope(ks, steps)) << "\n";
  }
}

int run_command(const std::string& config_path, const std::map<std::string, std::string>& given,
                const std::string& scenario, const std::string& out, std::string summary_out) {
  ScenarioConfig base;
  if (!config_path.empty()) apply_config_json(base, read_file(config_path));
  const nlohmann::json overrides = flag_overrides(given);

  std::vector<ScenarioConfig> configs;
  if (!scenario.empty() && scenario.rfind("fig", 0) == 0) {
    configs = preset_scenarios(scenario);
    for (auto& cfg : configs) apply_config_json(cfg, overrides.dump());
  } else {
    apply_config_json(base, overrides.dump());
    if (!scenario.empty()) base.scenario_id = scenario;
    configs.push_back(base);
  }
  for (const auto& cfg : configs) cfg.validate();

  std::vector<MetricRecord> records;
  for (const auto& cfg : configs) {
    std::cerr << "running " << cfg.scenario_id << " (" << cfg.runs << " runs)\n";
    auto part = run_scenario(cfg);
    records.insert(records.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }

  if (summary_out.empty()) summary_out = summary_path_for(out);
  write_csv(records, out);
  const auto summary = summarize(records);
  write_summary_csv(summary, summary_out);
  if (scenario == "fig02") report_growth(configs, summary);
  std::cout << "wrote " << records.size() << " records to " << out << " and " << summary.size()
            << " summary rows to " << summary_out << "\n";
  return kExitOk;
}

int presets_command() {
  for (const auto& p : list_presets()) std::cout << p.name << "  " << p.description << "\n";
  return kExitOk;
}

// Compares mean simulated convergence time of the one-channel, one-signal
// game with the exact expected hitting time of the corresponding chain.
int verify_command(std::size_t runs, std::uint64_t seed) {
  bool all_ok = true;
  const std::size_t target[] = {1};
  for (std::size_t n : {2, 3, 4, 8}) {
    for (double p : {0.25, 0.5, 0.75}) {
      markov::ChainModel model{n, p, markov::ChainVariant::kOriginal};
      const double exact = markov::expected_hitting_time(model, target).values[n];

      ScenarioConfig cfg;
      cfg.scenario_id = "verify";
      cfg.shape = {n, 1, 1};
      cfg.backoff_p = p;
      cfg.runs = runs;
      cfg.seed = seed;
      std::vector<double> steps;
      bool converged = true;
      for (const auto& r : run_static(cfg)) {
        steps.push_back(static_cast<double>(r.convergence_steps));
        converged = converged && r.converged;
      }
      const Interval ci = confidence_interval(steps);
      const double se = ci.halfwidth / 1.96;
      const double z = se > 0.0 ? std::abs(ci.mean - exact) / se : 0.0;
      const bool ok = converged && z <= 4.0;
      all_ok = all_ok && ok;
      std::printf("%s N=%zu p=%.2f exact=%.6f simulated=%.6f z=%.2f\n", ok ? "PASS" : "FAIL", n,
                  p, exact, ci.mean, z);
    }
  }
  std::printf("%s\n", all_ok ? "verify: all checks passed" : "verify: FAILED");
  return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anti-coordination channel allocation simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a preset or a custom scenario and write CSV output");
  std::string config_path;
  std::string scenario;
  std::string out = "anticoord.csv";
  std::string summary_out;
  std::map<std::string, std::string> given;
  run->add_option("--config", config_path, "JSON config file; flags override its values");
  run->add_option("--scenario", scenario, "preset name (fig01..fig17) or a custom label");
  run->add_option("--out", out, "data CSV path")->capture_default_str();
  run->add_option("--summary", summary_out, "summary CSV path (default: derived from --out)");
  for (const auto& spec : kFlags) {
    run->add_option_function<std::string>(
        std::string("--") + spec.name, [&given, &spec](const std::string& v) { given[spec.name] = v; },
        spec.help);
  }

  app.add_subcommand("presets", "list the presets");

  auto* verify = app.add_subcommand("verify", "check the simulator against the exact chain");
  std::size_t verify_runs = 10'000;
  std::uint64_t verify_seed = 1;
  verify->add_option("--runs", verify_runs, "replications per case")->capture_default_str();
  verify->add_option("--seed", verify_seed, "master seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return run_command(config_path, given, scenario, out, summary_out);
    if (app.got_subcommand("presets")) return presets_command();
    if (*verify) return verify_command(verify_runs, verify_seed);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
