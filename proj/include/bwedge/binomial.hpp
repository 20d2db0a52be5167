#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bwedge {

/// N ~ Binomial(n, p) with n >= 1, 0 < p <= 1.
struct BinomialParams {
  long n = 1;
  double p = 0.5;

  BinomialParams() = default;
  BinomialParams(long trials, double success);

  double mean() const noexcept { return static_cast<double>(n) * p; }
};

/// P(N = k), saddle-point form in log space; relative error ~1e-15 up to n = 1e6.
double binom_pmf(const BinomialParams& b, long k);

/// pmf(0..n) in one pass.
std::vector<double> binom_pmf_table(const BinomialParams& b);

/// sum_{k=1}^n k^alpha pmf(k), exact summation.
double bernoulli_sum(const BinomialParams& b, double alpha);

/// n p E[(N* + 1)^(alpha-1)], N* ~ Binomial(n-1, p). Equal to bernoulli_sum for every p.
double bound_o_rhs(const BinomialParams& b, double alpha);

/// f_alpha(n) = sum_{k>=1} k^{-alpha} pmf(k), alpha > 0.
double inverse_moment(const BinomialParams& b, double alpha);

/// Coefficients of f_alpha(n) ~ (np)^{-alpha} sum_k C[k] (np)^{-k}.
struct CoefficientTable {
  double alpha = 1.0;
  int K = 1;
  double p = 0.5;
  std::vector<double> C;

  /// (np)^{-alpha} sum_{k<terms} C[k] (np)^{-k}; terms defaults to K.
  double truncation(double np, std::optional<int> terms = std::nullopt) const;

  /// "alpha,k,C" rows with a header line.
  std::string to_csv() const;
};

/// Asymptotic coefficients built from binomial central moments written as
/// polynomials in n. Valid for 0 < p < 1 and 1 <= K <= 8.
CoefficientTable inverse_moment_coefficients(double alpha, int K, double p);

/// D(delta || p) between Bernoulli(delta) and Bernoulli(p), delta in [0,1], p in (0,1).
double kl_divergence_bernoulli(double delta, double p);

struct TailBound {
  double exact_tail = 0.0;  ///< P(N <= delta n)
  double bound = 0.0;       ///< exp(-n D(delta || p))
  bool holds() const noexcept { return exact_tail <= bound; }
};

/// Chernoff/KL lower-tail bound; 0 < delta < p < 1. Default delta = p/2.
TailBound kl_tail_bound(const BinomialParams& b, std::optional<double> delta = std::nullopt);

struct MomentPowerReport {
  double exact = 0.0;     ///< E[(N+1)^alpha]
  double majorant = 0.0;  ///< exp(-nD) + (delta n + 1)^alpha, or (n+1)^alpha for alpha >= 0
  double delta = 0.0;     ///< used only on the negative-alpha branch
  bool holds() const noexcept { return exact <= majorant; }
};

/// E[(N+1)^alpha] against the explicit majorant; requires p in (0, 1/2].
MomentPowerReport moment_power_bound_check(const BinomialParams& b, double alpha,
                                           std::optional<double> delta = std::nullopt);

}  // namespace bwedge
