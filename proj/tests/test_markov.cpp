#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "anticoord/errors.hpp"
#include "anticoord/markov.hpp"
#include "support.hpp"

using namespace anticoord;
using namespace anticoord::markov;

namespace {

// Value iteration from zero converges monotonically to the minimal
// non-negative solution; used as an independent check of the direct solver.
std::vector<double> iterate_hitting_time(const ChainModel& m, const std::vector<bool>& in_target,
                                         int sweeps) {
  const auto P = transition_matrix(m);
  std::vector<double> k(m.n_states(), 0.0);
  for (int s = 0; s < sweeps; ++s) {
    std::vector<double> next(m.n_states(), 0.0);
    for (std::size_t i = 0; i < m.n_states(); ++i) {
      if (in_target[i]) continue;
      double sum = 1.0;
      for (std::size_t j = 0; j < m.n_states(); ++j) {
        if (!in_target[j]) sum += P[i][j] * k[j];
      }
      next[i] = sum;
    }
    k = next;
  }
  return k;
}

double binomial_pmf(std::size_t n, std::size_t j, double q) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                  j * std::log(q) + (n - j) * std::log1p(-q));
}

}  // namespace

TEST_CASE("transition rows of the original chain") {
  const ChainModel m{5, 0.5, ChainVariant::kOriginal};
  auto r0 = transition_row(0, m);
  CHECK(r0[5] == 1.0);
  auto r1 = transition_row(1, m);
  CHECK(r1[1] == 1.0);
  const ChainModel two{2, 0.5, ChainVariant::kOriginal};
  auto r2 = transition_row(2, two);
  CHECK(r2[0] == doctest::Approx(0.25));
  CHECK(r2[1] == doctest::Approx(0.5));
  CHECK(r2[2] == doctest::Approx(0.25));
  CHECK_THROWS(transition_row(6, m));
}

TEST_CASE("chain variants differ only at the boundary") {
  const ChainModel y{4, 0.3, ChainVariant::kModifiedY};
  CHECK(transition_row(0, y)[0] == 1.0);
  CHECK(transition_row(1, y)[0] == doctest::Approx(0.3));
  CHECK(transition_row(1, y)[1] == doctest::Approx(0.7));
  const ChainModel z{4, 0.3, ChainVariant::kAbsorbedAtZeroAndOne};
  CHECK(transition_row(0, z)[0] == 1.0);
  CHECK(transition_row(1, z)[1] == 1.0);
  CHECK(transition_row(3, z) == transition_row(3, y));
}

TEST_CASE("binomial rows match a log-space pmf on both sides of the switch-over") {
  for (std::size_t n : {3, 20, 50, 51, 120, 300}) {
    for (double p : {0.1, 0.5, 0.9}) {
      const auto row = binomial_row(n, p, n + 1);
      for (std::size_t j = 0; j <= n; ++j) {
        CHECK(row[j] == doctest::Approx(binomial_pmf(n, j, 1.0 - p)).epsilon(1e-9).scale(1e-300));
      }
    }
  }
}

TEST_CASE("chain model validation") {
  CHECK_THROWS_AS((ChainModel{4, 0.0}).validate(), ConfigError);
  CHECK_THROWS_AS((ChainModel{4, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS((ChainModel{0, 0.5}).validate(), ConfigError);
}

TEST_CASE("expected hitting times for two agents") {
  const ChainModel m{2, 0.5, ChainVariant::kOriginal};
  const std::size_t zero_one[] = {0, 1};
  const auto k01 = expected_hitting_time(m, zero_one);
  CHECK(k01[0] == 0.0);
  CHECK(k01[1] == 0.0);
  CHECK(std::abs(k01[2] - 4.0 / 3.0) < 1e-12);
  const std::size_t one[] = {1};
  const auto k1 = expected_hitting_time(m, one);
  CHECK(std::abs(k1[2] - 2.5) < 1e-12);
  CHECK(std::abs(k1[0] - 3.5) < 1e-12);
}

TEST_CASE("direct solve agrees with value iteration") {
  for (std::size_t n : {2, 3, 5, 8}) {
    for (double p : {0.25, 0.5, 0.75}) {
      const ChainModel m{n, p, ChainVariant::kOriginal};
      const std::size_t one[] = {1};
      std::vector<bool> target(n + 1, false);
      target[1] = true;
      const auto exact = expected_hitting_time(m, one);
      const auto iter = iterate_hitting_time(m, target, 20'000);
      for (std::size_t i = 0; i <= n; ++i) CHECK(exact[i] == doctest::Approx(iter[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("states that can avoid the target forever have infinite hitting time") {
  const ChainModel z{4, 0.5, ChainVariant::kAbsorbedAtZeroAndOne};
  const std::size_t one[] = {1};
  const auto k = expected_hitting_time(z, one);
  CHECK(k[1] == 0.0);
  CHECK(std::isinf(k[0]));
  CHECK(std::isinf(k[3]));
  const auto h = hitting_probability(z, one);
  CHECK(h[0] == 0.0);
  CHECK(h[1] == 1.0);
}

TEST_CASE("hitting probabilities of the absorbed chain") {
  for (double p = 0.1; p < 0.95; p += 0.1) {
    const ChainModel z{10, p, ChainVariant::kAbsorbedAtZeroAndOne};
    const std::size_t one[] = {1};
    const auto h = hitting_probability(z, one);
    CHECK(std::abs(h[2] - 2 * (1 - p) / (2 - p)) < 1e-12);
  }
  const ChainModel half{2, 0.5, ChainVariant::kAbsorbedAtZeroAndOne};
  const std::size_t one[] = {1};
  CHECK(std::abs(hitting_probability(half, one)[2] - 2.0 / 3.0) < 1e-12);
}

TEST_CASE("the original chain reaches one almost surely") {
  for (std::size_t n : {2, 10, 64, 200}) {
    const ChainModel m{n, 0.5, ChainVariant::kOriginal};
    const std::size_t one[] = {1};
    CHECK(std::abs(hitting_probability(m, one)[n] - 1.0) < 1e-9);
  }
}

TEST_CASE("rego bound evaluations") {
  CHECK(rego_bound(2.0, 64) == 8.0);
  CHECK(rego_bound(2.0, 1) == 2.0);
  CHECK(rego_bound(1.1, 10) == doctest::Approx(36.0));
  CHECK(rego_bound(4.0, 1) == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(rego_bound(1.0, 4), ConfigError);
  CHECK_THROWS_AS(rego_bound(2.0, 0), ContractViolation);
}

TEST_CASE("single-channel bound evaluations") {
  CHECK(theorem5_bound(2, 0.5) == 6.0);
  CHECK(theorem5_bound(64, 0.5) == 16.0);
  for (std::size_t n = 2; n <= 64; ++n) {
    const ChainModel m{n, 0.5, ChainVariant::kOriginal};
    const std::size_t one[] = {1};
    CHECK(expected_hitting_time(m, one)[n] <= theorem5_bound(n, 0.5));
  }
}

TEST_CASE("hitting probability of one stays above 1-p") {
  CHECK(verify_lemma7(100, 0.5));
  CHECK(verify_lemma7(100, 0.9));
  CHECK(verify_lemma7(2, 0.3));
}

TEST_CASE("coupon-collector composition bound") {
  CHECK(coupon_collector_bound(2.5, 1) == doctest::Approx(2.5 * 2 + 1));
  CHECK(coupon_collector_bound(1.0, 4) == doctest::Approx(4 * std::log(4.0) + 8 + 1));
  CHECK(multisignal_bound(8, 1, 16, 0.5) > multisignal_bound(8, 1, 8, 0.5));
  CHECK(multichannel_bound(8, 2, 0.5) > 0.0);
}

TEST_CASE("sampled hitting times stop at the cap") {
  Rng rng = make_rng(1);
  const ChainModel y{4, 0.5, ChainVariant::kModifiedY};
  const std::size_t unreachable[] = {4};
  CHECK(sample_hitting_time(y, 3, unreachable, rng, 50) == 50);
  const std::size_t one[] = {1};
  CHECK(sample_hitting_time(y, 1, one, rng) == 0);
}
