#pragma once

// Special functions shared by the binomial and distribution modules. Mass
// functions are evaluated through the saddle-point decomposition
//   log f = -stirlerr(.) - bd0(.)  +  log-normalizer
// which keeps full relative precision for large arguments where a plain
// lgamma difference loses ~log10(n) digits.

namespace bwedge::special {

/// log(Gamma(a+1)) - [(a+1/2) log a - a + log sqrt(2 pi)], for a > 0.
double stirlerr(double a);

/// x log(x/m) + m - x, evaluated without cancellation when x is near m.
double bd0(double x, double m);

/// x^a e^{-x} / Gamma(a+1) for a > 0, x > 0.
double poisson_kernel(double a, double x);

/// Regularized lower incomplete gamma P(a, x); a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

}  // namespace bwedge::special
