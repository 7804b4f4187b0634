#include <cmath>

#include "doctest.h"
#include "infmax/walk.hpp"
#include "oracles.hpp"

using namespace infmax;

TEST_CASE("poisson rate of the walk") {
  CHECK(walk_rate(1, 1.0, 2) == 0.0);   // rate vanishes through i = r-1
  CHECK(walk_rate(1, 5.0, 4) == 0.0);
  CHECK(walk_rate(2, 1.0, 3) == 0.0);
  CHECK(walk_rate(3, 1.0, 2) == doctest::Approx(2.0));    // binom(2,1) * 1
  CHECK(walk_rate(4, 2.0, 3) == doctest::Approx(24.0));   // binom(3,2) * 8
  CHECK(walk_rate(2, 1.0, 2) == doctest::Approx(1.0));
  CHECK(walk_rate(11, 0.5, 2) == doctest::Approx(2.5));   // 10 * 0.25
}

TEST_CASE("walk params validation") {
  CHECK_THROWS(WalkParams{1, 1.0, 2, 100}.check());   // k < r
  CHECK_THROWS(WalkParams{2, 0.0, 2, 100}.check());   // c = 0
  CHECK_THROWS(WalkParams{2, 1.0, 1, 100}.check());   // r < 2
  CHECK_THROWS(WalkParams{5, 1.0, 2, 4}.check());     // horizon below k
  CHECK_NOTHROW(WalkParams{2, 1.0, 2, 100}.check());
}

TEST_CASE("vanishing c: the walk marches straight down to zero") {
  WalkParams p{5, 1e-9, 2, 1000};
  int hits_at_k = 0;
  for (int t = 0; t < 2000; ++t) {
    auto o = simulate_walk(p, static_cast<std::uint64_t>(t));
    REQUIRE(o.hit);
    if (o.hit_iter == 5) ++hits_at_k;
  }
  CHECK(hits_at_k == 2000);
}

TEST_CASE("hit at the earliest possible iteration has probability e^{-c^r}") {
  // k=r=2, c=1: hitting at iteration 2 requires a zero draw at rate 1
  WalkParams p{2, 1.0, 2, 1000};
  auto dist = hit_distribution(p, 200000, 42, 2);
  double freq2 = static_cast<double>(dist.hit_counts.at(2)) / static_cast<double>(dist.trials);
  double expect = std::exp(-1.0);
  double se = std::sqrt(expect * (1 - expect) / static_cast<double>(dist.trials));
  CHECK(std::fabs(freq2 - expect) < 3 * se);

  // buckets below k are empty and everything sums back to the trial count
  std::uint64_t total = dist.no_hit;
  for (const auto& [ell, count] : dist.hit_counts) {
    CHECK(ell >= 2);
    total += count;
  }
  CHECK(total == dist.trials);
}

TEST_CASE("estimate matches the state-distribution oracle within 3 SE") {
  struct Case {
    int k;
    double c;
    int r;
  };
  for (const Case& cs : {Case{2, 1.0, 2}, Case{3, 1.0, 2}, Case{2, 0.8, 2}}) {
    auto oracle = oracles::walk_hit_oracle(cs.k, cs.c, cs.r);
    REQUIRE(oracle.error_bound < 1e-9);
    WalkParams p{cs.k, cs.c, cs.r, 1000};
    const std::uint64_t trials = 200000;
    auto est = estimate_hit_prob(p, trials, 7, 2);
    double se = std::sqrt(oracle.hit_prob * (1 - oracle.hit_prob) / static_cast<double>(trials));
    INFO("k=", cs.k, " c=", cs.c, " oracle=", oracle.hit_prob, " mc=", est.p_hat);
    CHECK(std::fabs(est.p_hat - oracle.hit_prob) < 3 * se);
    CHECK(est.truncated_count < trials / 1000);
    CHECK(est.ci_low <= est.p_hat);
    CHECK(est.p_hat <= est.ci_high);
  }
}

TEST_CASE("state-distribution oracle against direct path enumeration") {
  // r=2, c=1, k=2: hits by iteration 4 decompose over the few low paths:
  //   hit@2: xi2=0                    e^-1
  //   hit@3: xi2=1, xi3=0             e^-1 * e^-2
  //   hit@4: x3=1 then xi4=0          (e^-1*2e^-2 + (e^-1/2)*e^-2) * e^-3
  auto oracle = oracles::walk_hit_oracle(2, 1.0, 2);
  double e1 = std::exp(-1.0), e3 = std::exp(-3.0), e6 = std::exp(-6.0);
  CHECK(oracle.hit_by_iter[2] == doctest::Approx(e1).epsilon(1e-12));
  CHECK(oracle.hit_by_iter[3] == doctest::Approx(e1 + e3).epsilon(1e-12));
  CHECK(oracle.hit_by_iter[4] == doctest::Approx(e1 + e3 + 2.5 * e6).epsilon(1e-12));
  // the limit is strictly larger than any finite-horizon value and below 1
  CHECK(oracle.hit_prob > oracle.hit_by_iter[4]);
  CHECK(oracle.hit_prob < 1.0);
}

TEST_CASE("huge drift pushes the hit probability to zero") {
  WalkParams p{2, 10.0, 2, 1000};
  auto est = estimate_hit_prob(p, 100000, 3, 2);
  CHECK(est.p_hat < 0.001);
}

TEST_CASE("single trial keeps a nondegenerate interval") {
  WalkParams p{2, 1.0, 2, 1000};
  auto est = estimate_hit_prob(p, 1, 5);
  CHECK((est.p_hat == 0.0 || est.p_hat == 1.0));
  CHECK(est.ci_high - est.ci_low > 0.0);
}

TEST_CASE("common-trial profile is monotone nonincreasing in k") {
  auto q = hit_prob_profile(1.0, 2, 2, 8, 1000, 100000, 17, 2);
  REQUIRE(q.size() == 7);
  for (std::size_t i = 0; i + 1 < q.size(); ++i) CHECK(q[i] >= q[i + 1]);
  // consistent with the independent estimator
  auto oracle = oracles::walk_hit_oracle(2, 1.0, 2);
  CHECK(std::fabs(q[0] - oracle.hit_prob) <
        4 * std::sqrt(oracle.hit_prob * (1 - oracle.hit_prob) / 100000.0));
}

TEST_CASE("thinning couples walks across c: larger c dominates trialwise") {
  // sample increments at c, thin binomially to c' < c; the thinned walk sits
  // below pointwise, so it must hit whenever the larger walk hits
  const double c_hi = 1.0, c_lo = 0.8;
  const int r = 2, max_iter = 400, k = 3;
  const double thin = std::pow(c_lo / c_hi, r);
  std::uint64_t hi_hits = 0, lo_hits = 0;
  for (int t = 0; t < 20000; ++t) {
    Rng rng = substream(23, static_cast<std::uint64_t>(t));
    std::int64_t x_hi = k, x_lo = k;
    bool hit_hi = false, hit_lo = false;
    for (int i = 1; i <= max_iter && (!hit_hi || !hit_lo); ++i) {
      std::int64_t xi = poisson(rng, walk_rate(i, c_hi, r));
      std::int64_t xi_thin = 0;
      for (std::int64_t j = 0; j < xi; ++j)
        if (rng.next_double() < thin) ++xi_thin;
      if (!hit_hi) {
        x_hi += -1 + xi;
        if (x_hi == 0) hit_hi = true;
      }
      if (!hit_lo) {
        x_lo += -1 + xi_thin;
        if (x_lo == 0) hit_lo = true;
      }
      REQUIRE((hit_lo || !hit_hi || x_lo <= x_hi));
    }
    if (hit_hi) {
      ++hi_hits;
      REQUIRE(hit_lo);  // dominance, trial by trial
    }
    if (hit_lo) ++lo_hits;
  }
  CHECK(lo_hits > hi_hits);
}

TEST_CASE("log-concavity of the failure probability") {
  // the margin q_{k+1}^2 - q_{k+2} q_k shrinks super-exponentially in k, so
  // only the first few k are decidable at this trial count
  auto rows = check_log_concavity(1.0, 2, 2, 3, 300000, 1000, 29, 2);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    INFO("k=", row.k, " diff=", row.rhs - row.lhs, " se=", row.se);
    CHECK(row.verdict == ConcavityVerdict::Holds);
    CHECK(row.q_k >= row.q_k1);
    CHECK(row.q_k1 >= row.q_k2);
  }
  // starved trials cannot separate the product from the square
  auto weak = check_log_concavity(1.0, 2, 2, 2, 10, 1000, 31);
  REQUIRE(weak.size() == 1);
  CHECK(weak[0].verdict == ConcavityVerdict::Indeterminate);
  CHECK_THROWS(check_log_concavity(1.0, 2, 1, 4, 100, 1000, 1));  // k_min < r
}
