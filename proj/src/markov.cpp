#include "anticoord/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "anticoord/errors.hpp"

namespace anticoord::markov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kLogSpaceAbove = 50;

using Matrix = std::vector<std::vector<double>>;

std::vector<bool> target_mask(const ChainModel& model, std::span<const std::size_t> targets) {
  if (targets.empty()) throw ContractViolation("target set must be nonempty");
  std::vector<bool> mask(model.n_states(), false);
  for (std::size_t t : targets) {
    if (t >= model.n_states()) throw ContractViolation("target state out of range");
    mask[t] = true;
  }
  return mask;
}

// States from which some state in `goal` is reachable (goal included).
std::vector<bool> can_reach(const Matrix& p, const std::vector<bool>& goal,
                            const std::vector<bool>& blocked) {
  std::vector<bool> reach = goal;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (reach[i] || blocked[i]) continue;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[i][j] > 0.0 && reach[j]) {
          reach[i] = true;
          changed = true;
          break;
        }
      }
    }
  }
  return reach;
}

// Dense Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) {
      std::ostringstream msg;
      msg << "singular hitting system at column " << col << " of " << n;
      throw NumericalError(msg.str());
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

bool is_lower_triangular(const Matrix& p, const std::vector<bool>& fixed) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (fixed[i]) continue;
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i][j] != 0.0) return false;
    }
  }
  return true;
}

// Solves x_i = base_i + sum_{j in unknown} p_ij x_j for the unknown states,
// taking x_j for known states as given in `x`.
void solve_unknowns(const Matrix& p, const std::vector<bool>& unknown, const std::vector<double>& base,
                    std::vector<double>& x) {
  const std::size_t n = p.size();
  std::vector<bool> fixed(n);
  for (std::size_t i = 0; i < n; ++i) fixed[i] = !unknown[i];

  if (is_lower_triangular(p, fixed)) {
    // Forward substitution: x_i (1 - p_ii) = base_i + sum_{j < i} p_ij x_j.
    for (std::size_t i = 0; i < n; ++i) {
      if (!unknown[i]) continue;
      double s = base[i];
      for (std::size_t j = 0; j < i; ++j) {
        if (p[i][j] != 0.0) s += p[i][j] * x[j];
      }
      const double diag = 1.0 - p[i][i];
      if (diag <= 0.0) throw NumericalError("self-absorbing state left among the unknowns");
      x[i] = s / diag;
    }
    return;
  }

  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (unknown[i]) index.push_back(i);
  }
  const std::size_t m = index.size();
  Matrix a(m, std::vector<double>(m, 0.0));
  std::vector<double> b(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = index[r];
    b[r] = base[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (!unknown[j] && p[i][j] != 0.0) b[r] += p[i][j] * x[j];
    }
    for (std::size_t c = 0; c < m; ++c) {
      a[r][c] = (r == c ? 1.0 : 0.0) - p[i][index[c]];
    }
  }
  const auto sol = solve_dense(std::move(a), std::move(b));
  for (std::size_t r = 0; r < m; ++r) x[index[r]] = sol[r];
}

}  // namespace

void ChainModel::validate() const {
  if (n_agents < 1) throw ConfigError("chain needs at least one agent");
  if (!(backoff_p > 0.0 && backoff_p < 1.0)) {
    throw ConfigError("chain back-off probability must lie in (0,1)");
  }
}

std::vector<double> binomial_row(std::size_t i, double backoff_p, std::size_t n_states) {
  std::vector<double> row(n_states, 0.0);
  const double keep = 1.0 - backoff_p;
  if (i <= kLogSpaceAbove) {
    // Multiplicative recurrence for C(i, j).
    double coeff = 1.0;
    for (std::size_t j = 0; j <= i; ++j) {
      if (j > 0) coeff = coeff * static_cast<double>(i - j + 1) / static_cast<double>(j);
      row[j] = coeff * std::pow(keep, static_cast<double>(j)) *
               std::pow(backoff_p, static_cast<double>(i - j));
    }
    return row;
  }
  const double log_keep = std::log(keep);
  const double log_back = std::log(backoff_p);
  const double lg_i = std::lgamma(static_cast<double>(i) + 1.0);
  for (std::size_t j = 0; j <= i; ++j) {
    const double log_coeff = lg_i - std::lgamma(static_cast<double>(j) + 1.0) -
                             std::lgamma(static_cast<double>(i - j) + 1.0);
    row[j] = std::exp(log_coeff + static_cast<double>(j) * log_keep +
                      static_cast<double>(i - j) * log_back);
  }
  return row;
}

std::vector<double> transition_row(std::size_t state, const ChainModel& model) {
  model.validate();
  const std::size_t n_states = model.n_states();
  if (state >= n_states) {
    throw ContractViolation("state " + std::to_string(state) + " outside 0.." +
                            std::to_string(model.n_agents));
  }
  std::vector<double> point(n_states, 0.0);
  switch (model.variant) {
    case ChainVariant::kOriginal:
      if (state == 0) {
        point[model.n_agents] = 1.0;
        return point;
      }
      if (state == 1) {
        point[1] = 1.0;
        return point;
      }
      break;
    case ChainVariant::kModifiedY:
      if (state == 0) {
        point[0] = 1.0;
        return point;
      }
      break;
    case ChainVariant::kAbsorbedAtZeroAndOne:
      if (state <= 1) {
        point[state] = 1.0;
        return point;
      }
      break;
  }
  return binomial_row(state, model.backoff_p, n_states);
}

std::vector<std::vector<double>> transition_matrix(const ChainModel& model) {
  Matrix p;
  p.reserve(model.n_states());
  for (std::size_t i = 0; i < model.n_states(); ++i) p.push_back(transition_row(i, model));
  return p;
}

HittingResult expected_hitting_time(const ChainModel& model, std::span<const std::size_t> targets) {
  const auto in_target = target_mask(model, targets);
  const Matrix p = transition_matrix(model);
  const std::size_t n = p.size();

  // Hitting A surely requires never entering a state that cannot reach A.
  const std::vector<bool> no_block(n, false);
  const auto reaches = can_reach(p, in_target, no_block);
  std::vector<bool> dead(n);
  for (std::size_t i = 0; i < n; ++i) dead[i] = !reaches[i];
  const auto may_die = can_reach(p, dead, in_target);

  std::vector<double> k(n, 0.0);
  std::vector<bool> unknown(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (in_target[i]) continue;
    if (may_die[i]) {
      k[i] = kInf;
    } else {
      unknown[i] = true;
    }
  }
  solve_unknowns(p, unknown, std::vector<double>(n, 1.0), k);
  return {std::move(k)};
}

HittingResult hitting_probability(const ChainModel& model, std::span<const std::size_t> targets) {
  const auto in_target = target_mask(model, targets);
  const Matrix p = transition_matrix(model);
  const std::size_t n = p.size();

  const auto reaches = can_reach(p, in_target, std::vector<bool>(n, false));
  std::vector<double> h(n, 0.0);
  std::vector<bool> unknown(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (in_target[i]) {
      h[i] = 1.0;
    } else if (reaches[i]) {
      unknown[i] = true;
    }
  }
  solve_unknowns(p, unknown, std::vector<double>(n, 0.0), h);
  for (double& v : h) v = std::clamp(v, 0.0, 1.0);
  return {std::move(h)};
}

double rego_bound(double beta, std::size_t start_state) {
  if (!(beta > 1.0)) throw ConfigError("rego bound needs beta > 1");
  if (start_state < 1) throw ContractViolation("rego bound needs a start state >= 1");
  const double i = static_cast<double>(start_state);
  // Smallest m >= 0 with beta^m >= i; corrects log-ratio rounding at exact powers.
  double m = std::ceil(std::log(i) / std::log(beta));
  if (m > 0.0 && std::pow(beta, m - 1.0) >= i) m -= 1.0;
  if (std::pow(beta, m) < i) m += 1.0;
  return m + beta / (beta - 1.0);
}

double theorem5_bound(std::size_t n_agents, double backoff_p) {
  if (!(backoff_p > 0.0 && backoff_p < 1.0)) {
    throw ConfigError("back-off probability must lie in (0,1)");
  }
  const double keep = 1.0 - backoff_p;
  return rego_bound(1.0 / keep, n_agents) / keep;
}

bool verify_lemma7(std::size_t n_agents, double backoff_p) {
  if (n_agents < 2) throw ContractViolation("hitting probability check needs N >= 2");
  const ChainModel model{n_agents, backoff_p, ChainVariant::kAbsorbedAtZeroAndOne};
  const std::size_t target[] = {1};
  const auto h = hitting_probability(model, target);
  for (std::size_t i = 2; i <= n_agents; ++i) {
    if (h[i] < 1.0 - backoff_p) return false;
  }
  return true;
}

double multichannel_bound(std::size_t n_agents, std::size_t n_channels, double backoff_p) {
  const double c = static_cast<double>(n_channels);
  const double log_n = std::log(static_cast<double>(std::max<std::size_t>(n_agents, 2)));
  return c / (1.0 - backoff_p) * (log_n / backoff_p + c);
}

double multisignal_bound(std::size_t n_agents, std::size_t n_channels, std::size_t n_signals,
                         double backoff_p) {
  const double k = static_cast<double>(n_signals);
  const double c = static_cast<double>(n_channels);
  const double log_n = std::log(static_cast<double>(std::max<std::size_t>(n_agents, 2)));
  return (k * std::log(k) + 2.0 * k) * c / (1.0 - backoff_p) * (c + log_n / backoff_p) + 1.0;
}

double coupon_collector_bound(double single_chain_time, std::size_t n_signals) {
  const double k = static_cast<double>(n_signals);
  return single_chain_time * k * std::log(k) + 2.0 * single_chain_time * k + 1.0;
}

std::uint64_t sample_hitting_time(const ChainModel& model, std::size_t start,
                                  std::span<const std::size_t> targets, Rng& rng,
                                  std::uint64_t cap) {
  const auto in_target = target_mask(model, targets);
  std::size_t state = start;
  std::uint64_t steps = 0;
  while (!in_target[state] && steps < cap) {
    switch (model.variant) {
      case ChainVariant::kOriginal:
        if (state == 0) {
          state = model.n_agents;
          ++steps;
          continue;
        }
        break;
      case ChainVariant::kModifiedY:
      case ChainVariant::kAbsorbedAtZeroAndOne:
        break;
    }
    const bool absorbing =
        (model.variant == ChainVariant::kOriginal && state == 1) ||
        (model.variant == ChainVariant::kModifiedY && state == 0) ||
        (model.variant == ChainVariant::kAbsorbedAtZeroAndOne && state <= 1);
    if (absorbing) return cap;
    state = std::binomial_distribution<std::size_t>(state, 1.0 - model.backoff_p)(rng);
    ++steps;
  }
  return steps;
}

}  // namespace anticoord::markov
