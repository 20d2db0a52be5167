#pragma once

#include <string>
#include <vector>

#include "bwedge/distributions.hpp"

namespace bwedge {

/// Standard normal CDF via erfc; absolute error well below 1e-14.
double normal_cdf(double x);
double normal_pdf(double x);

/// Dense real polynomial, coeffs[i] multiplies x^i.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double x) const noexcept;

  /// Index of the last nonzero coefficient; -1 for the zero polynomial.
  int degree() const noexcept;
  bool is_zero() const noexcept { return degree() < 0; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  Polynomial& operator+=(const Polynomial& other);
  friend Polynomial operator*(double scale, Polynomial poly);

  /// "[c0, c1, ...]" with round-trip precision.
  std::string to_string() const;

 private:
  std::vector<double> coeffs_;
};

/// One correction term size^exponent * poly(x) * phi(x).
struct ExpansionTerm {
  double exponent = 0.0;
  Polynomial poly;
};

/// Correction polynomials of an order-q expansion, exponents -1/2, -1, ..., -(q-2)/2.
struct ExpansionSet {
  int q = 3;
  std::vector<ExpansionTerm> terms;

  /// Phi(x) + sum_j size^{exponent_j} poly_j(x) phi(x), unclamped.
  double cdf(double size, double x) const;
};

/// p_1(x) = -(l3/6)(x^2-1); p_2(x) = -x[(l4/24)(x^2-3) + (l3^2/72)(x^4-10x^2+15)].
ExpansionSet edgeworth_polynomials(const CumulantSet& c, int q);

/// Edgeworth approximation of P(sqrt(k)(mean_k - mu)/sigma <= x).
double sample_mean_edgeworth_cdf(const CumulantSet& c, long k, int q, double x);

}  // namespace bwedge
