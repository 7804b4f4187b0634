#pragma once

#include <cstdint>
#include <vector>

namespace infmax {

struct WilsonInterval {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for a Bernoulli proportion. Nondegenerate even
// for 0 or n successes, unlike the Wald interval.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail p-value of a chi-square statistic.
double chi_square_pvalue(double stat, int df);

struct ChiSquareResult {
  double stat = 0.0;
  int df = 0;
  double pvalue = 1.0;
};

// Pearson goodness-of-fit of observed counts against expected counts
// (same total). Cells with expected == 0 are skipped and drop a degree of
// freedom; ddof subtracts further degrees (fitted parameters).
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected, int ddof = 0);

// Homogeneity test for two samples of bucket counts.
ChiSquareResult chi_square_homogeneity(const std::vector<std::uint64_t>& counts_a,
                                       const std::vector<std::uint64_t>& counts_b);

}  // namespace infmax
