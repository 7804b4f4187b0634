#include "doctest.h"
#include "infmax/walk.hpp"

using namespace infmax;

TEST_CASE("coupled trials: containment, strictness, and phase behavior") {
  const int k = 2, r = 2, max_iter = 1000;
  const double c = 1.0;
  std::uint64_t b_only = 0, skew = 0, symm = 0, none = 0;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    Rng rng = substream(301, t);
    CoupledOutcome o = coupled_trial(k, c, r, max_iter, rng);
    REQUIRE((!o.a_hit || o.b_hit));  // hard containment, every single trial
    if (o.b_hit && !o.a_hit) ++b_only;
    switch (o.phase) {
      case CouplingPhase::Symm:
        ++symm;
        REQUIRE(o.a_hit == o.b_hit);
        REQUIRE(o.a_hit_iter == o.b_hit_iter);
        break;
      case CouplingPhase::Skew: ++skew; break;
      case CouplingPhase::None:
        ++none;
        REQUIRE_FALSE(o.a_hit);
        REQUIRE_FALSE(o.b_hit);
        break;
    }
    if (o.a_hit) REQUIRE(o.a_hit_iter >= k + 2);
    if (o.b_hit) REQUIRE(o.b_hit_iter >= k + 1);
  }
  CHECK(b_only > 0);  // the strict part of the inequality
  CHECK(symm > 0);
  CHECK(skew > 0);
  INFO("symm=", symm, " skew=", skew, " none=", none, " b_only=", b_only);
}

TEST_CASE("coupling reproduces the free marginals of A and B") {
  CouplingReport rep = coupling_marginal_check(2, 1.0, 2, 200000, 1000, 77,
                                               CouplingMode::Full, 2);
  INFO("chi2_a=", rep.a_marginal.stat, " p_a=", rep.a_marginal.pvalue);
  INFO("chi2_b=", rep.b_marginal.stat, " p_b=", rep.b_marginal.pvalue);
  CHECK(rep.a_marginal.pvalue > 0.001);
  CHECK(rep.b_marginal.pvalue > 0.001);
  CHECK(rep.a_only == 0);
  CHECK(rep.symm_disagreements == 0);
  CHECK(rep.b_only > 0);
  // the coupled hit counts line up with the product structure: both free
  // walks target hit probabilities q_{k+2} q_k (A) and q_{k+1}^2 (B)
  CHECK(rep.a_hits < rep.b_hits);
}

TEST_CASE("negative control: dropping the dominance top-up corrupts A's marginal") {
  CouplingReport rep = coupling_marginal_check(2, 1.0, 2, 400000, 1000, 78,
                                               CouplingMode::NoDominanceExtra, 2);
  INFO("chi2_a=", rep.a_marginal.stat, " p_a=", rep.a_marginal.pvalue);
  CHECK(rep.a_marginal.pvalue < 1e-6);
  // B still moves freely; its marginal stays clean
  CHECK(rep.b_marginal.pvalue > 0.001);
}
