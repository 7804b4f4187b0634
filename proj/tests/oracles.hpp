#pragma once

// Test-side reference implementations, deliberately independent of the
// library code paths they validate.

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "infmax/sampler.hpp"

namespace infmax::oracles {

// ---- walk-state distribution iteration --------------------------------
//
// Evolves the full probability distribution of the walk position and
// accumulates the mass absorbed at 0. Mass that leaves the tracked window
// or survives the horizon is folded into a rigorous error bound via the
// supermartingale theta^x (theta solving ln(1/theta) = lambda (1 - theta)),
// so hit_prob <= true value <= hit_prob + error_bound.

struct WalkOracleResult {
  double hit_prob = 0.0;
  double error_bound = 0.0;
  std::vector<double> hit_by_iter;  // cumulative hit mass after iteration i (index i)
};

inline double oracle_rate(int i, double c, int r) {
  if (i <= r - 1) return 0.0;
  double b = 1.0;
  for (int j = 1; j <= r - 1; ++j) b *= static_cast<double>(i - j) / j;
  return b * std::pow(c, r);
}

inline double oracle_theta(double lambda) {
  if (lambda <= 1.05) return 1.0;
  double lo = 1e-14, hi = 1.0 / lambda;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (std::log(1.0 / mid) - lambda * (1.0 - mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

inline WalkOracleResult walk_hit_oracle(int k, double c, int r, int horizon = 10000,
                                        int x_cap = 600, double stop_eps = 1e-13) {
  if (k < 1 || k > x_cap) throw std::invalid_argument("walk_hit_oracle: bad k");
  std::vector<double> dist(static_cast<std::size_t>(x_cap) + 1, 0.0);
  dist[static_cast<std::size_t>(k)] = 1.0;
  WalkOracleResult res;
  res.hit_by_iter.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
  std::vector<double> pmf(static_cast<std::size_t>(x_cap) + 1, 0.0);
  std::vector<double> next(dist.size(), 0.0);
  for (int i = 1; i <= horizon; ++i) {
    const double lam = oracle_rate(i, c, r);
    if (lam < 500.0) {
      pmf[0] = std::exp(-lam);
      for (int j = 1; j <= x_cap; ++j) pmf[static_cast<std::size_t>(j)] =
          pmf[static_cast<std::size_t>(j - 1)] * lam / j;
    } else {
      for (int j = 0; j <= x_cap; ++j)
        pmf[static_cast<std::size_t>(j)] =
            std::exp(-lam + j * std::log(lam) - std::lgamma(j + 1.0));
    }
    const double theta_now = oracle_theta(oracle_rate(i + 1, c, r));
    std::fill(next.begin(), next.end(), 0.0);
    for (int x = 1; x <= x_cap; ++x) {
      const double m = dist[static_cast<std::size_t>(x)];
      if (m == 0.0) continue;
      const int maxj = x_cap - x + 1;
      double cum = 0.0;
      for (int j = 0; j <= maxj; ++j) {
        const double w = pmf[static_cast<std::size_t>(j)];
        next[static_cast<std::size_t>(x - 1 + j)] += m * w;
        cum += w;
      }
      double escaped = m * (1.0 - cum);
      if (escaped > 0.0)
        res.error_bound += escaped * std::pow(theta_now, static_cast<double>(x_cap) + 1.0);
    }
    res.hit_prob += next[0];
    res.hit_by_iter[static_cast<std::size_t>(i)] = res.hit_prob;
    next[0] = 0.0;
    dist.swap(next);
    double alive_bound = 0.0;
    for (int x = 1; x <= x_cap; ++x)
      alive_bound += dist[static_cast<std::size_t>(x)] *
                     std::pow(theta_now, static_cast<double>(x));
    if (alive_bound < stop_eps) {
      res.error_bound += alive_bound;
      for (int j = i + 1; j <= horizon; ++j) res.hit_by_iter[static_cast<std::size_t>(j)] =
          res.hit_prob;
      return res;
    }
  }
  double alive = 0.0;
  for (int x = 1; x <= x_cap; ++x) {
    double theta = oracle_theta(oracle_rate(horizon + 1, c, r));
    alive += dist[static_cast<std::size_t>(x)] * std::pow(theta, static_cast<double>(x));
  }
  res.error_bound += alive;
  return res;
}

// ---- full-rescan fixed point contagion ---------------------------------

inline std::vector<bool> naive_r_complex(const GraphSample& g, const std::vector<Vertex>& seeds,
                                         int r) {
  std::vector<bool> infected(g.n(), false);
  for (Vertex s : seeds) infected[s] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Vertex> newly;
    for (Vertex v = 0; v < g.n(); ++v) {
      if (infected[v]) continue;
      int cnt = 0;
      for (Vertex u : g.neighbors(v)) {
        if (infected[u]) ++cnt;
      }
      if (cnt >= r) newly.push_back(v);
    }
    for (Vertex v : newly) infected[v] = true;
    changed = !newly.empty();
  }
  return infected;
}

// ---- exhaustive composition search over an h-table ----------------------
//
// Maximizes sum_i h[i][k_i]; among optima prefers the smallest k_m, then
// k_{m-1}, ... (the documented tie-break of the DP). Sums accumulate in
// subtree order so values compare bitwise against the DP.

struct BestComposition {
  double value = 0.0;
  std::vector<int> alloc;
};

inline void enumerate_rec(const std::vector<std::vector<double>>& h, std::size_t i, int left,
                          double acc, std::vector<int>& cur, BestComposition& best,
                          bool& have_best) {
  if (i == h.size()) {
    if (left != 0) return;
    bool better = false;
    if (!have_best || acc > best.value) {
      better = true;
    } else if (acc == best.value) {
      // reverse-lexicographic preference: compare from the last subtree down
      for (std::size_t j = cur.size(); j-- > 0;) {
        if (cur[j] != best.alloc[j]) {
          better = cur[j] < best.alloc[j];
          break;
        }
      }
    }
    if (better) {
      best.value = acc;
      best.alloc = cur;
      have_best = true;
    }
    return;
  }
  for (int k = 0; k <= left; ++k) {
    cur[i] = k;
    enumerate_rec(h, i + 1, left - k, acc + h[i][static_cast<std::size_t>(k)], cur, best,
                  have_best);
  }
  cur[i] = 0;
}

inline BestComposition enumerate_best(const std::vector<std::vector<double>>& h, int K) {
  BestComposition best;
  bool have_best = false;
  std::vector<int> cur(h.size(), 0);
  if (h.empty()) return best;
  enumerate_rec(h, 0, K, 0.0, cur, best, have_best);
  return best;
}

// ---- supercritical branching survival ----------------------------------
// giant-component fraction of G(m, mu/m): largest root of g = 1 - e^(-mu g)

inline double giant_fraction(double mu) {
  if (mu <= 1.0) return 0.0;
  double lo = 1e-9, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double f = 1.0 - std::exp(-mu * mid) - mid;
    if (f > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace infmax::oracles
