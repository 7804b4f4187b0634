#include "infmax/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace infmax {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.p_hat = p;
  w.lo = center - half;
  w.hi = center + half;
  if (w.lo < 0.0) w.lo = 0.0;
  if (w.hi > 1.0) w.hi = 1.0;
  return w;
}

namespace {

// series expansion of P(a,x), good for x < a+1
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), good for x >= a+1
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_pvalue(double stat, int df) {
  if (df <= 0) return 1.0;
  if (stat <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * stat);
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected, int ddof) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  ChiSquareResult r;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    double d = observed[i] - expected[i];
    r.stat += d * d / expected[i];
    ++cells;
  }
  r.df = cells - 1 - ddof;
  r.pvalue = chi_square_pvalue(r.stat, r.df);
  return r;
}

ChiSquareResult chi_square_homogeneity(const std::vector<std::uint64_t>& counts_a,
                                       const std::vector<std::uint64_t>& counts_b) {
  if (counts_a.size() != counts_b.size())
    throw std::invalid_argument("chi_square_homogeneity: size mismatch");
  double total_a = 0.0, total_b = 0.0;
  for (auto v : counts_a) total_a += static_cast<double>(v);
  for (auto v : counts_b) total_b += static_cast<double>(v);
  if (total_a == 0.0 || total_b == 0.0)
    throw std::invalid_argument("chi_square_homogeneity: empty sample");
  ChiSquareResult r;
  int cells = 0;
  const double total = total_a + total_b;
  for (std::size_t i = 0; i < counts_a.size(); ++i) {
    double pooled = static_cast<double>(counts_a[i]) + static_cast<double>(counts_b[i]);
    if (pooled == 0.0) continue;
    double ea = pooled * total_a / total;
    double eb = pooled * total_b / total;
    double da = static_cast<double>(counts_a[i]) - ea;
    double db = static_cast<double>(counts_b[i]) - eb;
    r.stat += da * da / ea + db * db / eb;
    ++cells;
  }
  r.df = cells - 1;
  r.pvalue = chi_square_pvalue(r.stat, r.df);
  return r;
}

}  // namespace infmax
