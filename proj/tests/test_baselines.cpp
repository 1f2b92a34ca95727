#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "anticoord/baselines.hpp"
#include "anticoord/errors.hpp"
#include "support.hpp"

using namespace anticoord;
using namespace anticoord::baselines;

namespace {

constexpr Action Q = kQuietAction;
constexpr Action T = 1;

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("channel game payoffs") {
  const ChannelGamePayoff unit{1.0};
  CHECK(payoff(Profile{T, Q}, 1, unit) == std::vector<double>{1.0, 0.0});
  CHECK(payoff(Profile{T, T}, 1, unit) == std::vector<double>{-1.0, -1.0});
  const ChannelGamePayoff c3{3.0};
  CHECK(payoff(Profile{1, 1, 2}, 2, c3) == std::vector<double>{-3.0, -3.0, 1.0});
  CHECK_THROWS_AS(payoff(Profile{3}, 2, unit), ContractViolation);
  CHECK(ActionSet{4}.size() == 5);
}

TEST_CASE("counterfactual payoffs hold opponents fixed") {
  const ChannelGamePayoff unit{1.0};
  CHECK(counterfactual_payoffs(Profile{1, 2, Q}, 2, 2, unit) == std::vector<double>{0.0, -1.0, -1.0});
  CHECK(counterfactual_payoffs(Profile{1, Q, Q}, 1, 2, unit) == std::vector<double>{0.0, -1.0, 1.0});
}

TEST_CASE("collision-free covering profiles") {
  CHECK(collision_free_and_covering(Profile{1, Q, 2}, 2));
  CHECK_FALSE(collision_free_and_covering(Profile{1, 1, 2}, 2));
  CHECK_FALSE(collision_free_and_covering(Profile{1, Q, Q}, 2));
}

TEST_CASE("normalized loss maps the payoff range onto [0,1]") {
  const ChannelGamePayoff c{2.0};
  CHECK(normalized_loss(1.0, c) == 0.0);
  CHECK(normalized_loss(-2.0, c) == 1.0);
  CHECK(normalized_loss(0.0, c) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("regret matching rule") {
  RegretState s(2);
  const auto first = regret_matching_distribution(s, 4.0);
  CHECK(first == std::vector<double>{0.5, 0.5});

  // Quiet played once while transmitting would have paid 0.4.
  s.record(Q, std::vector<double>{0.0, 0.4});
  CHECK(s.average(Q, T) == doctest::Approx(0.4));
  const auto d = regret_matching_distribution(s, 2.0);
  CHECK(d[T] == doctest::Approx(0.2));
  CHECK(d[Q] == doctest::Approx(0.8));

  Rng rng = make_rng(4);
  const std::size_t n = 10'000;
  std::size_t switches = 0;
  for (std::size_t i = 0; i < n; ++i) switches += regret_matching_step(s, 2.0, rng) == T;
  CHECK(std::abs(static_cast<double>(switches) / n - 0.2) < 0.01);

  RegretState no_regret(3);
  no_regret.record(2, std::vector<double>{-1.0, 0.0, 1.0});
  const auto stay = regret_matching_distribution(no_regret, 12.0);
  CHECK(stay == std::vector<double>{0.0, 0.0, 1.0});

  RegretState big(2);
  big.record(Q, std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(regret_matching_distribution(big, 0.5), ConfigError);
}

TEST_CASE("default inertia") {
  CHECK(default_inertia(1, {1.0}) == 8.0);
  CHECK(default_inertia(3, {0.5}) == 12.0);
}

TEST_CASE("polynomial weights update") {
  CHECK(pw_update(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.1)[0] == doctest::Approx(0.9));
  CHECK(pw_update(std::vector<double>{0.7}, std::vector<double>{0.0}, 0.1)[0] == 0.7);
  const auto w = pw_update(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 0.0}, 0.5);
  CHECK(w[0] == 0.5);
  CHECK(w[1] == 1.0);
  CHECK_THROWS_AS(pw_update(std::vector<double>{1.0}, std::vector<double>{1.5}, 0.1), ContractViolation);
  CHECK_THROWS_AS(pw_update(std::vector<double>{1.0}, std::vector<double>{0.5}, 1.0), ConfigError);
}

TEST_CASE("combining instance distributions") {
  const std::vector<std::vector<double>> same = {{0.2, 0.8}, {0.2, 0.8}};
  auto p = combine_internal(same);
  CHECK(p[0] == doctest::Approx(0.2));
  CHECK(p[1] == doctest::Approx(0.8));

  const std::vector<std::vector<double>> doubly = {{0.1, 0.6, 0.3}, {0.6, 0.3, 0.1}, {0.3, 0.1, 0.6}};
  p = combine_internal(doubly);
  for (double x : p) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  const std::vector<std::vector<double>> two = {{0.5, 0.5}, {0.25, 0.75}};
  p = combine_internal(two);
  CHECK(std::abs(p[0] - 1.0 / 3.0) < 1e-9);
  CHECK(std::abs(p[1] - 2.0 / 3.0) < 1e-9);

  // Periodic chain: plain power iteration would oscillate.
  const std::vector<std::vector<double>> swap = {{0.0, 1.0}, {1.0, 0.0}};
  p = combine_internal(swap);
  CHECK(p[0] == doctest::Approx(0.5));

  const std::vector<std::vector<double>> bad = {{0.5, 0.4}, {0.5, 0.5}};
  CHECK_THROWS_AS(combine_internal(bad), ContractViolation);

  // Nearly decomposable chain that cannot settle within a tiny iteration cap.
  const std::vector<std::vector<double>> slow = {{1.0 - 1e-9, 1e-9}, {1e-9, 1.0 - 1e-9}};
  CHECK_THROWS_AS(combine_internal(slow, std::vector<double>{1.0, 0.0}, 1e-12, 10), NumericalError);
}

TEST_CASE("internal update scales each instance by its combined weight") {
  const ChannelGamePayoff unit{1.0};
  auto state = WeightState::uniform(2, 0.1);
  const std::vector<double> payoffs = {0.0, -1.0};
  const auto next = update_pw_internal(state, payoffs, std::vector<double>{0.0, 1.0}, unit);
  CHECK(next.weights[0] == state.weights[0]);
  // Weights are kept up to a common factor, so compare ratios.
  CHECK(next.weights[1][1] / next.weights[1][0] == doctest::Approx(0.9 / (1.0 - 0.1 * 0.5)));

  const auto sym = update_pw_internal(state, payoffs, std::vector<double>{0.5, 0.5}, unit);
  CHECK(sym.weights[0] == sym.weights[1]);

  auto single = WeightState::uniform(1, 0.2);
  const auto one = update_pw_internal(single, std::vector<double>{-1.0}, std::vector<double>{1.0}, unit);
  const auto plain = pw_update(single.weights[0], std::vector<double>{1.0}, 0.2);
  CHECK(plain[0] == doctest::Approx(0.8));
  CHECK(one.weights[0][0] > 0.0);
}

TEST_CASE("internal regret audit") {
  const ChannelGamePayoff unit{1.0};
  const std::vector<Profile> psne(50, Profile{T, Q});
  CHECK(max_internal_regret(psne, 1, unit, 0) == 0.0);
  CHECK(max_internal_regret(psne, 1, unit, 1) == 0.0);

  const std::vector<Profile> crash = {Profile{T, T}};
  CHECK(max_internal_regret(crash, 1, unit, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(max_internal_regret(std::vector<Profile>{}, 1, unit, 0), ContractViolation);

  InternalRegretAudit audit(2, 1, unit);
  audit.record(Profile{T, T});
  CHECK(audit.max_regret(0) == doctest::Approx(1.0));
  audit.record(Profile{T, Q});
  CHECK(audit.max_regret(0) == doctest::Approx(max_internal_regret(
                                  std::vector<Profile>{{T, T}, {T, Q}}, 1, unit, 0)));
  audit.reset();
  CHECK(audit.rounds() == 0);
}

TEST_CASE("learners emit valid actions and probability vectors") {
  const ChannelGamePayoff unit{1.0};
  Rng rng = make_rng(5);
  RegretMatchingLearner rm(2, unit);
  PolynomialWeightsLearner pw(2, 0.1, unit);
  for (int t = 0; t < 200; ++t) {
    const Action a = rm.act(rng);
    const Action b = pw.act(rng);
    CHECK(a <= 2);
    CHECK(b <= 2);
    const Profile profile = {a, b, 1};
    rm.observe(a, counterfactual_payoffs(profile, 0, 2, unit));
    pw.observe(counterfactual_payoffs(profile, 1, 2, unit));
    CHECK(std::abs(total(pw.combined()) - 1.0) < 1e-9);
  }
}
