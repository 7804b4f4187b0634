#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "infmax/rng.hpp"
#include "infmax/stats.hpp"

namespace infmax {

// Poisson rate of the walk's rightward movement in iteration i:
// binom(i-1, r-1) * c^r; zero for i <= r-1.
double walk_rate(int i, double c, int r);

struct WalkParams {
  int k = 2;         // start position / seed count, k >= r
  double c = 1.0;    // critical coefficient, > 0
  int r = 2;         // contagion threshold, >= 2
  int max_iter = 1000;

  void check() const;
};

// The walk starts at x = k and in iteration i moves by -1 + Po(rate(i)).
// `hit` means x reached 0 exactly (the only negative movement is -1, so 0 is
// never skipped). A non-hitting trial ends once x exceeds the remaining
// iterations -- from there no hit within the horizon is possible -- and is
// `truncated` only when the survival certificate (a supermartingale tail
// bound on ever hitting 0 from that position) cannot rule out a hit beyond
// the horizon. truncated trials count as not hit.
struct WalkOutcome {
  bool hit = false;
  int hit_iter = 0;
  bool truncated = false;
};

struct HitEstimate {
  double p_hat = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t truncated_count = 0;
  double ci_low = 0.0;   // 95% Wilson bounds
  double ci_high = 0.0;
};

WalkOutcome simulate_walk(const WalkParams& params, Rng& rng);
WalkOutcome simulate_walk(const WalkParams& params, std::uint64_t seed);

// Monte Carlo estimate of the hit probability (= 1 - survival); trials are
// substreamed per index and merge deterministically for any thread count.
HitEstimate estimate_hit_prob(const WalkParams& params, std::uint64_t trials, std::uint64_t seed,
                              int threads = 1);

struct HitDistribution {
  std::map<int, std::uint64_t> hit_counts;  // hit iteration -> trials
  std::uint64_t no_hit = 0;                 // survived-or-truncated bucket
  std::uint64_t trials = 0;
};

HitDistribution hit_distribution(const WalkParams& params, std::uint64_t trials,
                                 std::uint64_t seed, int threads = 1);

// Hit probabilities for every start k in [k_lo, k_hi] from common trials:
// per trial the increments are shared across k, so the estimates are
// monotone nonincreasing in k by construction, not just in expectation.
std::vector<double> hit_prob_profile(double c, int r, int k_lo, int k_hi, int max_iter,
                                     std::uint64_t trials, std::uint64_t seed, int threads = 1);

enum class ConcavityVerdict { Holds, Indeterminate, Violated };
const char* to_string(ConcavityVerdict v);

struct ConcavityRow {
  int k = 0;
  double q_k = 0.0, q_k1 = 0.0, q_k2 = 0.0;  // hit estimates at k, k+1, k+2
  double lhs = 0.0;   // q_{k+2} * q_k
  double rhs = 0.0;   // q_{k+1}^2
  double se = 0.0;    // first-order propagated standard error of rhs - lhs
  ConcavityVerdict verdict = ConcavityVerdict::Indeterminate;
};

// Tests the strict log-concavity of the hit probability, q_{k+2} q_k <
// q_{k+1}^2, for each k in [k_min, k_max]. Estimates use independent
// streams per k; the verdict is Holds/Violated only beyond 2 propagated SE.
std::vector<ConcavityRow> check_log_concavity(double c, int r, int k_min, int k_max,
                                              std::uint64_t trials, int max_iter,
                                              std::uint64_t seed, int threads = 1);

// ---- coupled walks ----------------------------------------------------
//
// Two walks on Z^2 driven on a common iteration clock: A starts at
// (k+2, k), B at (k+1, k+1); each hits when it reaches (0,0) at the end of
// an iteration, and a coordinate that ends an iteration at 0 is stuck
// there. Iterations decompose into Po(2*rate) unit steps split by fair
// coins between the axes. The coupling lets B move freely and steers A:
//
//   Phase I      A repeats B's movements until either the two positions
//                become symmetric about y = x (checked after every step) or
//                A ends an iteration on y = 0.
//   Phase Symm   A mirrors B; the two hit or survive together.
//   Phase Skew   A is stuck to y = 0 one unit right of B. A copies B's
//                x-movement until B ends an iteration at x = 0; from then,
//                A's x replays B's y-history time-shifted to the moment A
//                got stuck, topped up with Po(2*(rate gap)) extra steps so
//                A's marginal stays correct while never outpacing B's
//                descent. Hence A hitting forces B to hit.

enum class CouplingPhase { None, Symm, Skew };
const char* to_string(CouplingPhase p);

// Full is the faithful construction; NoDominanceExtra omits the rate-gap
// top-up in Phase Skew (a deliberately broken variant used as a negative
// control for the marginal test).
enum class CouplingMode { Full, NoDominanceExtra };

struct CoupledOutcome {
  bool a_hit = false;
  bool b_hit = false;
  int a_hit_iter = 0;
  int b_hit_iter = 0;
  CouplingPhase phase = CouplingPhase::None;
};

CoupledOutcome coupled_trial(int k, double c, int r, int max_iter, Rng& rng,
                             CouplingMode mode = CouplingMode::Full);
CoupledOutcome coupled_trial(int k, double c, int r, int max_iter, std::uint64_t seed,
                             CouplingMode mode = CouplingMode::Full);

// free 2-d walk from (x0, y0), for marginal comparisons
struct Walk2DOutcome {
  bool hit = false;
  int hit_iter = 0;
};
Walk2DOutcome walk2d_free(std::int64_t x0, std::int64_t y0, double c, int r, int max_iter,
                          Rng& rng);

struct CouplingReport {
  std::uint64_t trials = 0;
  std::uint64_t a_hits = 0, b_hits = 0, both_hit = 0, a_only = 0, b_only = 0;
  std::uint64_t phase_none = 0, phase_symm = 0, phase_skew = 0;
  std::uint64_t symm_disagreements = 0;  // Symm trials where a_hit != b_hit
  // hit-time buckets: {hit at iter <= k+2, hit later, no hit}
  std::array<std::uint64_t, 3> a_buckets{}, b_buckets{};
  std::array<std::uint64_t, 3> free_a_buckets{}, free_b_buckets{};
  ChiSquareResult a_marginal, b_marginal;
};

// Runs the coupled ensemble next to independently simulated free walks and
// chi-square-compares the hit/hit-time marginals of A and B.
CouplingReport coupling_marginal_check(int k, double c, int r, std::uint64_t trials, int max_iter,
                                       std::uint64_t seed,
                                       CouplingMode mode = CouplingMode::Full, int threads = 1);

}  // namespace infmax
