#include "anticoord/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "anticoord/errors.hpp"

namespace anticoord::baselines {

void ChannelGamePayoff::validate() const {
  if (!(collision_cost >= 0.0)) throw ConfigError("collision cost must be >= 0");
}

namespace {

std::vector<std::size_t> channel_load(std::span<const Action> profile, std::size_t n_channels) {
  std::vector<std::size_t> load(n_channels + 1, 0);
  for (Action a : profile) {
    if (a > n_channels) throw ContractViolation("action outside the channel game");
    ++load[a];
  }
  return load;
}

}  // namespace

std::vector<double> payoff(std::span<const Action> profile, std::size_t n_channels,
                           const ChannelGamePayoff& cost) {
  if (n_channels < 1) throw ContractViolation("channel game needs C >= 1");
  const auto load = channel_load(profile, n_channels);
  std::vector<double> out(profile.size(), 0.0);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Action a = profile[i];
    if (a == kQuietAction) continue;
    out[i] = load[a] == 1 ? 1.0 : -cost.collision_cost;
  }
  return out;
}

std::vector<double> counterfactual_payoffs(std::span<const Action> profile, std::size_t agent,
                                           std::size_t n_channels, const ChannelGamePayoff& cost) {
  auto load = channel_load(profile, n_channels);
  --load[profile[agent]];
  std::vector<double> out(n_channels + 1, 0.0);
  for (Action b = 1; b <= n_channels; ++b) {
    out[b] = load[b] == 0 ? 1.0 : -cost.collision_cost;
  }
  return out;
}

double normalized_loss(double payoff_value, const ChannelGamePayoff& cost) {
  return (1.0 - payoff_value) / (1.0 + cost.collision_cost);
}

bool collision_free_and_covering(std::span<const Action> profile, std::size_t n_channels) {
  const auto load = channel_load(profile, n_channels);
  for (std::size_t c = 1; c <= n_channels; ++c) {
    if (load[c] != 1) return false;
  }
  return true;
}

// --- Regret matching -------------------------------------------------------

double RegretState::average(Action a, Action b) const {
  if (round == 0) return 0.0;
  return cumulative[a * n_actions + b] / static_cast<double>(round);
}

void RegretState::record(Action played, std::span<const double> payoffs_by_action) {
  const double realized = payoffs_by_action[played];
  for (Action b = 0; b < n_actions; ++b) {
    cumulative[played * n_actions + b] += payoffs_by_action[b] - realized;
  }
  ++round;
  last_action = played;
}

double default_inertia(std::size_t n_channels, const ChannelGamePayoff& cost) {
  return 2.0 * static_cast<double>(n_channels + 1) * (1.0 + cost.collision_cost);
}

std::vector<double> regret_matching_distribution(const RegretState& state, double inertia) {
  const std::size_t n = state.n_actions;
  if (state.round == 0) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (!(inertia > 0.0)) throw ConfigError("inertia must be positive");

  std::vector<double> dist(n, 0.0);
  const Action last = state.last_action;
  double moved = 0.0;
  for (Action b = 0; b < n; ++b) {
    if (b == last) continue;
    dist[b] = std::max(0.0, state.average(last, b)) / inertia;
    moved += dist[b];
  }
  if (moved > 1.0 + 1e-12) {
    std::ostringstream msg;
    msg << "inertia " << inertia << " too small: switching mass " << moved << " exceeds 1";
    throw ConfigError(msg.str());
  }
  dist[last] = std::max(0.0, 1.0 - moved);
  return dist;
}

Action sample(std::span<const double> distribution, Rng& rng) {
  const double u = uniform_unit(rng);
  double acc = 0.0;
  for (std::size_t a = 0; a < distribution.size(); ++a) {
    acc += distribution[a];
    if (u < acc) return a;
  }
  // Rounding left a sliver of mass unassigned; fall back to the last supported action.
  for (std::size_t a = distribution.size(); a-- > 0;) {
    if (distribution[a] > 0.0) return a;
  }
  return 0;
}

Action regret_matching_step(const RegretState& state, double inertia, Rng& rng) {
  return sample(regret_matching_distribution(state, inertia), rng);
}

// --- Polynomial weights ----------------------------------------------------

std::vector<double> pw_update(std::span<const double> weights, std::span<const double> losses,
                              double eta) {
  if (weights.size() != losses.size()) throw ContractViolation("weights/losses size mismatch");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("learning rate must lie in (0,1)");
  std::vector<double> out(weights.size());
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (!(losses[a] >= 0.0 && losses[a] <= 1.0)) {
      throw ContractViolation("loss outside [0,1]; payoffs must be normalized first");
    }
    out[a] = weights[a] * (1.0 - eta * losses[a]);
  }
  return out;
}

WeightState WeightState::uniform(std::size_t n_actions, double eta) {
  return {std::vector<std::vector<double>>(n_actions, std::vector<double>(n_actions, 1.0)), eta};
}

std::vector<std::vector<double>> WeightState::instance_distributions() const {
  std::vector<std::vector<double>> dists;
  dists.reserve(weights.size());
  for (const auto& w : weights) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> d(w.size());
    for (std::size_t a = 0; a < w.size(); ++a) d[a] = w[a] / total;
    dists.push_back(std::move(d));
  }
  return dists;
}

std::vector<double> combine_internal(const std::vector<std::vector<double>>& instance_distributions,
                                     std::optional<std::vector<double>> initial, double tolerance,
                                     std::size_t max_iterations) {
  const std::size_t n = instance_distributions.size();
  if (n == 0) throw ContractViolation("no instance distributions");
  for (const auto& row : instance_distributions) {
    if (row.size() != n) throw ContractViolation("instance distributions must be square");
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw ContractViolation("instance distribution does not sum to 1");
  }

  std::vector<double> p = initial && initial->size() == n
                              ? std::move(*initial)
                              : std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double change = 0.0;
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) next[b] += p[a] * instance_distributions[a][b];
    }
    change = 0.0;
    double total = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      next[b] = 0.5 * (p[b] + next[b]);
      change += std::abs(next[b] - p[b]);
      total += next[b];
    }
    for (double& v : next) v /= total;
    std::swap(p, next);
    if (change < tolerance) return p;
  }
  std::ostringstream msg;
  msg << "combined distribution did not converge after " << max_iterations
      << " iterations (last L1 change " << change << ")";
  throw NumericalError(msg.str());
}

WeightState update_pw_internal(WeightState state, std::span<const double> realized_payoffs,
                               std::span<const double> last_combined,
                               const ChannelGamePayoff& cost) {
  const std::size_t n = state.weights.size();
  if (realized_payoffs.size() != n || last_combined.size() != n) {
    throw ContractViolation("payoff / combined vector size mismatch");
  }
  std::vector<double> losses(n);
  for (std::size_t b = 0; b < n; ++b) losses[b] = normalized_loss(realized_payoffs[b], cost);

  std::vector<double> scaled(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (last_combined[a] == 0.0) continue;
    for (std::size_t b = 0; b < n; ++b) scaled[b] = last_combined[a] * losses[b];
    auto w = pw_update(state.weights[a], scaled, state.eta);
    // Only ratios matter; rescale so long runs do not underflow to zero.
    const double top = *std::max_element(w.begin(), w.end());
    for (double& v : w) v = std::max(v / top, std::numeric_limits<double>::min());
    state.weights[a] = std::move(w);
  }
  return state;
}

// --- Audit -----------------------------------------------------------------

namespace {

double max_pair_regret(const RegretState& state) {
  double best = 0.0;  // the a == b pair
  for (Action a = 0; a < state.n_actions; ++a) {
    for (Action b = 0; b < state.n_actions; ++b) {
      if (a != b) best = std::max(best, state.average(a, b));
    }
  }
  return best;
}

}  // namespace

double max_internal_regret(std::span<const Profile> play_history, std::size_t n_channels,
                           const ChannelGamePayoff& cost, std::size_t agent) {
  if (play_history.empty()) throw ContractViolation("regret audit needs a nonempty history");
  RegretState state(n_channels + 1);
  for (const auto& profile : play_history) {
    state.record(profile[agent], counterfactual_payoffs(profile, agent, n_channels, cost));
  }
  return max_pair_regret(state);
}

InternalRegretAudit::InternalRegretAudit(std::size_t n_agents, std::size_t n_channels,
                                         ChannelGamePayoff cost)
    : n_agents_(n_agents), n_channels_(n_channels), cost_(cost) {
  reset();
}

void InternalRegretAudit::reset() {
  states_.assign(n_agents_, RegretState(n_channels_ + 1));
  rounds_ = 0;
}

void InternalRegretAudit::record(std::span<const Action> profile) {
  for (std::size_t i = 0; i < n_agents_; ++i) {
    states_[i].record(profile[i], counterfactual_payoffs(profile, i, n_channels_, cost_));
  }
  ++rounds_;
}

double InternalRegretAudit::max_regret(std::size_t agent) const {
  return max_pair_regret(states_[agent]);
}

double InternalRegretAudit::max_regret_all() const {
  double best = 0.0;
  for (const auto& s : states_) best = std::max(best, max_pair_regret(s));
  return best;
}

// --- Learners --------------------------------------------------------------

RegretMatchingLearner::RegretMatchingLearner(std::size_t n_channels, const ChannelGamePayoff& cost)
    : RegretMatchingLearner(n_channels, default_inertia(n_channels, cost)) {
  // Average regrets per pair are bounded by 1 + c, so the switching mass is at
  // most C (1 + c) / inertia.
  if (inertia_ < static_cast<double>(n_channels) * (1.0 + cost.collision_cost)) {
    throw ConfigError("inertia too small for the payoff range");
  }
}

RegretMatchingLearner::RegretMatchingLearner(std::size_t n_channels, double inertia)
    : state_(n_channels + 1), inertia_(inertia) {
  if (!(inertia > 0.0)) throw ConfigError("inertia must be positive");
}

Action RegretMatchingLearner::act(Rng& rng) const { return regret_matching_step(state_, inertia_, rng); }

void RegretMatchingLearner::observe(Action played, std::span<const double> payoffs_by_action) {
  state_.record(played, payoffs_by_action);
}

PolynomialWeightsLearner::PolynomialWeightsLearner(std::size_t n_channels, double eta,
                                                   ChannelGamePayoff cost)
    : state_(WeightState::uniform(n_channels + 1, eta)), cost_(cost) {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("learning rate must lie in (0,1)");
  cost_.validate();
}

Action PolynomialWeightsLearner::act(Rng& rng) {
  std::optional<std::vector<double>> warm;
  if (!combined_.empty()) warm = combined_;
  combined_ = combine_internal(state_.instance_distributions(), std::move(warm));
  return sample(combined_, rng);
}

void PolynomialWeightsLearner::observe(std::span<const double> payoffs_by_action) {
  state_ = update_pw_internal(std::move(state_), payoffs_by_action, combined_, cost_);
}

}  // namespace anticoord::baselines
