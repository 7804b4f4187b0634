#include "infmax/rng.hpp"

#include <stdexcept>

namespace infmax {

double standard_normal(Rng& rng) {
  // Marsaglia polar method
  for (;;) {
    double u = 2.0 * rng.next_double() - 1.0;
    double v = 2.0 * rng.next_double() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double gamma_variate(Rng& rng, double shape) {
  // Marsaglia-Tsang squeeze method, shape >= 1
  if (shape < 1.0) throw std::invalid_argument("gamma_variate: shape < 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = standard_normal(rng);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.next_double();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

namespace {

std::int64_t poisson_inversion(Rng& rng, double mean) {
  double p = std::exp(-mean);
  double f = p;
  double u = rng.next_double();
  std::int64_t k = 0;
  while (u > f) {
    ++k;
    p *= mean / static_cast<double>(k);
    f += p;
    if (k > 200) break;  // cumulative rounding guard; mass beyond is ~0 for mean < 10
  }
  return k;
}

// PTRD, Hormann 1993. Valid for mean >= 10.
std::int64_t poisson_ptrd(Rng& rng, double mean) {
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_mean - mean - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

std::uint64_t binomial_small(Rng& rng, std::uint64_t n, double p) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (rng.next_double() < p) ++hits;
  }
  return hits;
}

}  // namespace

std::int64_t poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) return poisson_inversion(rng, mean);
  return poisson_ptrd(rng, mean);
}

std::uint64_t binomial(Rng& rng, std::uint64_t n, double p) {
  if (p <= 0.0 || n == 0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - binomial(rng, n, 1.0 - p);
  if (n <= 64) return binomial_small(rng, n, p);
  // Split on the median order statistic X ~ Beta(i, n+1-i) of n uniforms:
  // exactly i of them fall below X, so the count below p conditions cleanly
  // on which side of p the statistic landed. Recursion depth is O(log n).
  std::uint64_t i = (n + 1) / 2;
  double ga = gamma_variate(rng, static_cast<double>(i));
  double gb = gamma_variate(rng, static_cast<double>(n + 1 - i));
  double x = ga / (ga + gb);
  if (x <= p) {
    double q = (p - x) / (1.0 - x);
    return i + binomial(rng, n - i, q < 1.0 ? q : 1.0);
  }
  return binomial(rng, i - 1, p / x);
}

}  // namespace infmax
