#include "infmax/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "infmax/parallel.hpp"

namespace infmax {

double walk_rate(int i, double c, int r) {
  if (i <= r - 1) return 0.0;
  // binom(i-1, r-1) * c^r, computed as a running product; r is small
  double b = 1.0;
  for (int j = 1; j <= r - 1; ++j) {
    b *= static_cast<double>(i - j) / static_cast<double>(j);
  }
  return b * std::pow(c, r);
}

void WalkParams::check() const {
  if (r < 2) throw std::invalid_argument("WalkParams: r must be >= 2");
  if (k < r) throw std::invalid_argument("WalkParams: k must be >= r");
  if (!(c > 0.0)) throw std::invalid_argument("WalkParams: c must be > 0");
  if (max_iter < k) throw std::invalid_argument("WalkParams: max_iter must be >= k");
}

namespace {

// Root of ln(1/theta) = lambda * (1 - theta) in (0,1). theta^x bounds the
// probability that a walk at position x with all future rates >= lambda
// ever reaches 0 (theta^x is a supermartingale there). Returns 1 when
// lambda is too small for a useful bound.
double survival_theta(double lambda) {
  if (lambda <= 1.05) return 1.0;
  double lo = 1e-14, hi = 1.0 / lambda;  // root lies below the stationary point 1/lambda
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double f = std::log(1.0 / mid) - lambda * (1.0 - mid);
    if (f > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

bool certified_never_hits(std::int64_t x, int next_iter, double c, int r) {
  double theta = survival_theta(walk_rate(next_iter, c, r));
  if (theta >= 1.0) return false;
  return static_cast<double>(x) * std::log(theta) < std::log(1e-9);
}

}  // namespace

WalkOutcome simulate_walk(const WalkParams& params, Rng& rng) {
  std::int64_t x = params.k;
  for (int i = 1; i <= params.max_iter; ++i) {
    x += -1 + poisson(rng, walk_rate(i, params.c, params.r));
    if (x == 0) return {true, i, false};
    if (x > params.max_iter - i) {
      // unreachable-by-horizon; flag as truncated unless provably never hits
      return {false, 0, !certified_never_hits(x, i + 1, params.c, params.r)};
    }
  }
  return {false, 0, true};  // not reached: the guard above fires at i = max_iter
}

WalkOutcome simulate_walk(const WalkParams& params, std::uint64_t seed) {
  params.check();
  Rng rng = substream(seed, stream_tag::kWalk);
  return simulate_walk(params, rng);
}

HitEstimate estimate_hit_prob(const WalkParams& params, std::uint64_t trials, std::uint64_t seed,
                              int threads) {
  params.check();
  if (trials == 0) throw std::invalid_argument("estimate_hit_prob: trials must be >= 1");
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0), trunc(chunks, 0);
  parallel_chunks(trials, kChunk, threads,
                  [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                    std::uint64_t h = 0, t = 0;
                    for (std::uint64_t trial = begin; trial < end; ++trial) {
                      Rng rng = substream(seed, stream_tag::kWalk, trial);
                      WalkOutcome o = simulate_walk(params, rng);
                      if (o.hit) ++h;
                      if (o.truncated) ++t;
                    }
                    hits[chunk] = h;
                    trunc[chunk] = t;
                  });
  HitEstimate est;
  est.trials = trials;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    est.hits += hits[c];
    est.truncated_count += trunc[c];
  }
  WilsonInterval w = wilson_interval(est.hits, trials);
  est.p_hat = w.p_hat;
  est.ci_low = w.lo;
  est.ci_high = w.hi;
  return est;
}

HitDistribution hit_distribution(const WalkParams& params, std::uint64_t trials,
                                 std::uint64_t seed, int threads) {
  params.check();
  if (trials == 0) throw std::invalid_argument("hit_distribution: trials must be >= 1");
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::vector<std::uint64_t>> local(chunks);
  std::vector<std::uint64_t> local_nohit(chunks, 0);
  parallel_chunks(trials, kChunk, threads,
                  [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                    auto& hist = local[chunk];
                    hist.assign(static_cast<std::size_t>(params.max_iter) + 1, 0);
                    for (std::uint64_t trial = begin; trial < end; ++trial) {
                      Rng rng = substream(seed, stream_tag::kWalk, trial);
                      WalkOutcome o = simulate_walk(params, rng);
                      if (o.hit)
                        ++hist[static_cast<std::size_t>(o.hit_iter)];
                      else
                        ++local_nohit[chunk];
                    }
                  });
  HitDistribution dist;
  dist.trials = trials;
  std::vector<std::uint64_t> merged(static_cast<std::size_t>(params.max_iter) + 1, 0);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    dist.no_hit += local_nohit[c];
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i] += local[c][i];
  }
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (merged[i] > 0) dist.hit_counts[static_cast<int>(i)] = merged[i];
  }
  return dist;
}

std::vector<double> hit_prob_profile(double c, int r, int k_lo, int k_hi, int max_iter,
                                     std::uint64_t trials, std::uint64_t seed, int threads) {
  if (k_lo < r || k_hi < k_lo) throw std::invalid_argument("hit_prob_profile: bad k range");
  if (trials == 0) throw std::invalid_argument("hit_prob_profile: trials must be >= 1");
  // The walk from k hits 0 iff the running down-drift D_l = sum(1 - xi_j)
  // reaches k; D moves up by at most 1 per iteration, so its running max M
  // decides every start at once: hit(k) <=> M >= k.
  const std::size_t buckets = static_cast<std::size_t>(k_hi) + 2;  // M clipped to k_hi+1
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::vector<std::uint64_t>> local(chunks);
  parallel_chunks(trials, kChunk, threads,
                  [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                    auto& hist = local[chunk];
                    hist.assign(buckets, 0);
                    for (std::uint64_t trial = begin; trial < end; ++trial) {
                      Rng rng = substream(seed, stream_tag::kProfile, trial);
                      std::int64_t d = 0, m = 0;
                      for (int i = 1; i <= max_iter; ++i) {
                        d += 1 - poisson(rng, walk_rate(i, c, r));
                        if (d > m) m = d;
                        if (m > k_hi) break;                       // every start already hit
                        if (d + (max_iter - i) <= m) break;        // max cannot improve
                      }
                      if (m < 0) m = 0;
                      if (m > k_hi + 1) m = k_hi + 1;
                      ++hist[static_cast<std::size_t>(m)];
                    }
                  });
  std::vector<std::uint64_t> merged(buckets, 0);
  for (std::uint64_t ch = 0; ch < chunks; ++ch)
    for (std::size_t i = 0; i < buckets; ++i) merged[i] += local[ch][i];
  // q(k) = Pr(M >= k): suffix sums
  std::vector<double> q(static_cast<std::size_t>(k_hi - k_lo) + 1, 0.0);
  std::uint64_t acc = 0;
  for (int k = k_hi + 1; k >= k_lo; --k) {
    acc += merged[static_cast<std::size_t>(k)];
    if (k <= k_hi) q[static_cast<std::size_t>(k - k_lo)] = static_cast<double>(acc) /
                                                           static_cast<double>(trials);
  }
  return q;
}

const char* to_string(ConcavityVerdict v) {
  switch (v) {
    case ConcavityVerdict::Holds: return "holds";
    case ConcavityVerdict::Indeterminate: return "indeterminate";
    case ConcavityVerdict::Violated: return "violated";
  }
  return "?";
}

std::vector<ConcavityRow> check_log_concavity(double c, int r, int k_min, int k_max,
                                              std::uint64_t trials, int max_iter,
                                              std::uint64_t seed, int threads) {
  if (k_min < r) throw std::invalid_argument("check_log_concavity: k_min must be >= r");
  if (k_max < k_min) throw std::invalid_argument("check_log_concavity: k_max < k_min");
  // independent stream per start position
  std::vector<double> q(static_cast<std::size_t>(k_max + 2 - k_min) + 1);
  std::vector<double> var(q.size());
  for (int k = k_min; k <= k_max + 2; ++k) {
    WalkParams p;
    p.k = k;
    p.c = c;
    p.r = r;
    p.max_iter = max_iter;
    HitEstimate est =
        estimate_hit_prob(p, trials, substream_key(seed, 0x4C434B56, static_cast<std::uint64_t>(k)),
                          threads);
    q[static_cast<std::size_t>(k - k_min)] = est.p_hat;
    var[static_cast<std::size_t>(k - k_min)] =
        est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials);
  }
  std::vector<ConcavityRow> rows;
  for (int k = k_min; k <= k_max; ++k) {
    std::size_t i = static_cast<std::size_t>(k - k_min);
    ConcavityRow row;
    row.k = k;
    row.q_k = q[i];
    row.q_k1 = q[i + 1];
    row.q_k2 = q[i + 2];
    row.lhs = row.q_k2 * row.q_k;
    row.rhs = row.q_k1 * row.q_k1;
    row.se = std::sqrt(4.0 * row.q_k1 * row.q_k1 * var[i + 1] + row.q_k2 * row.q_k2 * var[i] +
                       row.q_k * row.q_k * var[i + 2]);
    double diff = row.rhs - row.lhs;
    if (diff > 2.0 * row.se)
      row.verdict = ConcavityVerdict::Holds;
    else if (diff < -2.0 * row.se)
      row.verdict = ConcavityVerdict::Violated;
    else
      row.verdict = ConcavityVerdict::Indeterminate;
    rows.push_back(row);
  }
  return rows;
}

const char* to_string(CouplingPhase p) {
  switch (p) {
    case CouplingPhase::None: return "none";
    case CouplingPhase::Symm: return "symm";
    case CouplingPhase::Skew: return "skew";
  }
  return "?";
}

Walk2DOutcome walk2d_free(std::int64_t x0, std::int64_t y0, double c, int r, int max_iter,
                          Rng& rng) {
  std::int64_t x = x0, y = y0;
  for (int i = 1; i <= max_iter; ++i) {
    const double lam = walk_rate(i, c, r);
    if (x > 0 && y > 0) {
      x += -1 + poisson(rng, lam);
      y += -1 + poisson(rng, lam);
    } else if (x == 0) {
      y += -1 + poisson(rng, lam);
    } else {  // y == 0
      x += -1 + poisson(rng, lam);
    }
    if (x == 0 && y == 0) return {true, i};
    if (std::max(x, y) > max_iter - i) return {false, 0};  // out of reach within horizon
  }
  return {false, 0};
}

CoupledOutcome coupled_trial(int k, double c, int r, int max_iter, Rng& rng, CouplingMode mode) {
  if (k < r) throw std::invalid_argument("coupled_trial: k must be >= r");
  CoupledOutcome out;

  // ---- Phase I: A at (xa, ya), B at (xa-1, ya+1), identical movement.
  // A stays strictly below the diagonal: ya - xa = -2 at iteration starts,
  // and the per-step difference walk triggers the symmetric event the
  // moment ya - xa reaches -1.
  std::int64_t xa = k + 2, ya = k;
  int iter = 0;
  bool symm = false, skew = false;
  std::int64_t steps_left = 0;  // remaining steps of the iteration where symm fired
  while (iter < max_iter) {
    ++iter;
    const double lam2 = 2.0 * walk_rate(iter, c, r);
    std::int64_t steps = poisson(rng, lam2);
    --xa;
    --ya;
    for (std::int64_t j = 1; j <= steps; ++j) {
      if (rng.next_coin())
        ++xa;
      else
        ++ya;
      if (ya - xa == -1) {
        symm = true;
        steps_left = steps - j;
        break;
      }
    }
    if (symm) break;
    if (ya == 0) {  // end of iteration on the axis: A is stuck there (xa >= 2 here)
      skew = true;
      break;
    }
  }

  if (!symm && !skew) {
    out.phase = CouplingPhase::None;  // truncated in Phase I; neither walk hit
    return out;
  }

  if (symm) {
    // ---- Phase Symm: A mirrors B from here on, so their fates coincide.
    // Simulate B to completion; B is at the mirror of A.
    out.phase = CouplingPhase::Symm;
    std::int64_t xb = xa - 1, yb = ya + 1;
    for (std::int64_t j = 0; j < steps_left; ++j) {
      if (rng.next_coin())
        ++xb;
      else
        ++yb;
    }
    // iteration `iter` is complete; yb >= 1 here so B cannot have hit yet
    std::int64_t x = xb, y = yb;
    for (int i = iter + 1; i <= max_iter; ++i) {
      const double lam = walk_rate(i, c, r);
      if (x > 0 && y > 0) {
        x += -1 + poisson(rng, lam);
        y += -1 + poisson(rng, lam);
      } else if (x == 0) {
        y += -1 + poisson(rng, lam);
      } else {
        x += -1 + poisson(rng, lam);
      }
      if (x == 0 && y == 0) {
        out.b_hit = true;
        out.b_hit_iter = i;
        break;
      }
      if (std::max(x, y) > max_iter - i) break;
    }
    out.a_hit = out.b_hit;
    out.a_hit_iter = out.b_hit_iter;
    return out;
  }

  // ---- Phase Skew: A stuck on y = 0 at (xa, 0); B at (xa-1, 1).
  out.phase = CouplingPhase::Skew;
  const int t_skew = iter;
  std::int64_t xb = xa - 1, yb = 1;
  std::vector<std::int64_t> beta;  // B's y-direction Poisson draws after t_skew
  int t_star = -1;

  for (int i = t_skew + 1; i <= max_iter; ++i) {
    const double lam = walk_rate(i, c, r);
    std::int64_t alpha_b = poisson(rng, lam);
    if (yb > 0) {
      std::int64_t beta_b = poisson(rng, lam);
      beta.push_back(beta_b);
      yb += -1 + beta_b;
    }
    xb += -1 + alpha_b;
    xa += -1 + alpha_b;  // A copies B's x-movement; xa == xb + 1
    if (xb == 0) {
      t_star = i;
      if (yb == 0) {
        out.b_hit = true;
        out.b_hit_iter = i;
      }
      break;
    }
    if (xb > max_iter - i) return out;  // neither x can reach 0 within the horizon
  }
  if (t_star < 0) return out;  // horizon ran out before B reached x = 0

  // B continues stuck to x = 0 until its y-coordinate lands on 0.
  if (!out.b_hit) {
    for (int i = t_star + 1; i <= max_iter; ++i) {
      std::int64_t beta_b = poisson(rng, walk_rate(i, c, r));
      beta.push_back(beta_b);
      yb += -1 + beta_b;
      if (yb == 0) {
        out.b_hit = true;
        out.b_hit_iter = i;
        break;
      }
      if (yb > max_iter - i) break;
    }
  }

  // A sits at (1, 0) at the end of iteration t_star. Its x now replays B's
  // recorded y-draws one at a time, shifted by t_star - t_skew iterations,
  // plus fair-coin halves of Po(2*(rate(i) - rate(iota))) extra steps that
  // restore the correct marginal at the later (larger) rate.
  std::int64_t x = 1;
  for (int t = 1; t_star + t <= max_iter; ++t) {
    const int i_abs = t_star + t;
    const double lam_i = walk_rate(i_abs, c, r);
    std::int64_t alpha_a;
    if (t <= static_cast<int>(beta.size())) {
      std::int64_t extra = 0;
      if (mode == CouplingMode::Full) {
        const double lam_gap = lam_i - walk_rate(t_skew + t, c, r);
        std::int64_t extra_steps = poisson(rng, 2.0 * lam_gap);
        for (std::int64_t s = 0; s < extra_steps; ++s)
          if (rng.next_coin()) ++extra;
      }
      alpha_a = beta[static_cast<std::size_t>(t - 1)] + extra;
    } else {
      alpha_a = poisson(rng, lam_i);  // B's y is frozen; A moves freely
    }
    x += -1 + alpha_a;
    if (x == 0) {
      out.a_hit = true;
      out.a_hit_iter = i_abs;
      break;
    }
    if (x > max_iter - i_abs) break;
  }
  return out;
}

CoupledOutcome coupled_trial(int k, double c, int r, int max_iter, std::uint64_t seed,
                             CouplingMode mode) {
  Rng rng = substream(seed, stream_tag::kCoupling);
  return coupled_trial(k, c, r, max_iter, rng, mode);
}

CouplingReport coupling_marginal_check(int k, double c, int r, std::uint64_t trials, int max_iter,
                                       std::uint64_t seed, CouplingMode mode, int threads) {
  if (trials == 0) throw std::invalid_argument("coupling_marginal_check: trials must be >= 1");
  constexpr std::uint64_t kChunk = 2048;
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<CouplingReport> local(chunks);
  const int early = k + 2;  // earliest possible hit iteration for A
  auto bucket_of = [early](bool hit, int hit_iter) -> std::size_t {
    if (!hit) return 2;
    return hit_iter <= early ? 0 : 1;
  };
  parallel_chunks(trials, kChunk, threads,
                  [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                    CouplingReport rep;
                    for (std::uint64_t trial = begin; trial < end; ++trial) {
                      Rng crng = substream(seed, stream_tag::kCoupling, trial);
                      CoupledOutcome o = coupled_trial(k, c, r, max_iter, crng, mode);
                      if (o.a_hit) ++rep.a_hits;
                      if (o.b_hit) ++rep.b_hits;
                      if (o.a_hit && o.b_hit) ++rep.both_hit;
                      if (o.a_hit && !o.b_hit) ++rep.a_only;
                      if (o.b_hit && !o.a_hit) ++rep.b_only;
                      switch (o.phase) {
                        case CouplingPhase::None: ++rep.phase_none; break;
                        case CouplingPhase::Symm:
                          ++rep.phase_symm;
                          if (o.a_hit != o.b_hit) ++rep.symm_disagreements;
                          break;
                        case CouplingPhase::Skew: ++rep.phase_skew; break;
                      }
                      ++rep.a_buckets[bucket_of(o.a_hit, o.a_hit_iter)];
                      ++rep.b_buckets[bucket_of(o.b_hit, o.b_hit_iter)];
                      Rng arng = substream(seed, stream_tag::kWalk2d, 1, trial);
                      Walk2DOutcome fa = walk2d_free(k + 2, k, c, r, max_iter, arng);
                      ++rep.free_a_buckets[bucket_of(fa.hit, fa.hit_iter)];
                      Rng brng = substream(seed, stream_tag::kWalk2d, 2, trial);
                      Walk2DOutcome fb = walk2d_free(k + 1, k + 1, c, r, max_iter, brng);
                      ++rep.free_b_buckets[bucket_of(fb.hit, fb.hit_iter)];
                    }
                    local[chunk] = rep;
                  });
  CouplingReport total;
  total.trials = trials;
  for (const auto& rep : local) {
    total.a_hits += rep.a_hits;
    total.b_hits += rep.b_hits;
    total.both_hit += rep.both_hit;
    total.a_only += rep.a_only;
    total.b_only += rep.b_only;
    total.phase_none += rep.phase_none;
    total.phase_symm += rep.phase_symm;
    total.phase_skew += rep.phase_skew;
    total.symm_disagreements += rep.symm_disagreements;
    for (std::size_t i = 0; i < 3; ++i) {
      total.a_buckets[i] += rep.a_buckets[i];
      total.b_buckets[i] += rep.b_buckets[i];
      total.free_a_buckets[i] += rep.free_a_buckets[i];
      total.free_b_buckets[i] += rep.free_b_buckets[i];
    }
  }
  auto to_vec = [](const std::array<std::uint64_t, 3>& a) {
    return std::vector<std::uint64_t>(a.begin(), a.end());
  };
  total.a_marginal = chi_square_homogeneity(to_vec(total.a_buckets), to_vec(total.free_a_buckets));
  total.b_marginal = chi_square_homogeneity(to_vec(total.b_buckets), to_vec(total.free_b_buckets));
  return total;
}

}  // namespace infmax
