#include "bwedge/edgeworth.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "bwedge/error.hpp"

namespace bwedge {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int Polynomial::degree() const noexcept {
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) {
    if (coeffs_[static_cast<std::size_t>(i)] != 0.0) return i;
  }
  return -1;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Polynomial operator*(double scale, Polynomial poly) {
  for (double& c : poly.coeffs_) c *= scale;
  return poly;
}

std::string Polynomial::to_string() const {
  std::string out = "[";
  char buf[64];
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ", ";
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, coeffs_[i]);
    out.append(buf, ptr);
  }
  return out + "]";
}

double ExpansionSet::cdf(double size, double x) const {
  double correction = 0.0;
  for (const auto& term : terms) correction += std::pow(size, term.exponent) * term.poly(x);
  return normal_cdf(x) + correction * normal_pdf(x);
}

ExpansionSet edgeworth_polynomials(const CumulantSet& c, int q) {
  if (q < 3 || q > 4) fail(ErrorCode::UnsupportedOrder, "Edgeworth polynomials implemented for q in [3,4]");
  if (c.order() < q) fail(ErrorCode::UnsupportedOrder, "cumulant set shorter than requested order");
  const double l3 = c.lambda(3);
  ExpansionSet set;
  set.q = q;
  set.terms.push_back({-0.5, Polynomial({l3 / 6.0, 0.0, -l3 / 6.0})});
  if (q == 4) {
    const double l4 = c.lambda(4);
    const double a = l4 / 24.0;
    const double b = l3 * l3 / 72.0;
    // -x[a(x^2-3) + b(x^4-10x^2+15)]
    set.terms.push_back({-1.0, Polynomial({0.0, 3.0 * a - 15.0 * b, 0.0, -a + 10.0 * b, 0.0, -b})});
  }
  return set;
}

double sample_mean_edgeworth_cdf(const CumulantSet& c, long k, int q, double x) {
  if (k < 1) fail(ErrorCode::IllegalParameter, "sample size k must be >= 1");
  return edgeworth_polynomials(c, q).cdf(static_cast<double>(k), x);
}

}  // namespace bwedge
