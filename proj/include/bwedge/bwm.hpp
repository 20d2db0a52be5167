#pragma once

// Distribution of Z = sqrt(N)(mu_hat - mu)/sigma for the Bernoulli weighted
// mean mu_hat = sum Y_i T_i / sum T_i (0 when every T_i is 0), N = sum T_i.
//
// Conditioning on N gives the exact finite-n mixture
//   F_Z(x) = sum_{k=1}^n pmf(k) F_k(x) + 1{x >= 0} (1-p)^n,
// with F_k the CDF of the standardized mean of k draws. Replacing F_k by its
// Edgeworth expansion and the inverse binomial moments by their asymptotic
// series yields the closed form Phi(x) + sum_j n^{-j/2} p*_j(x) phi(x).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bwedge/binomial.hpp"
#include "bwedge/distributions.hpp"
#include "bwedge/edgeworth.hpp"

namespace bwedge {

struct BwmProblem {
  DistributionSpec dist;
  BinomialParams binom;
  int q = 4;
  CumulantSet cumulants;
};

/// Rejects lattice (discrete) laws, zero variance and q outside [3,4].
BwmProblem make_bwm_problem(DistributionSpec dist, BinomialParams binom, int q);

enum class PerK { OracleExact, Edgeworth };

enum class Execution { Serial, Parallel };

/// Continuous part sum_k pmf(k) F_k(x) and the atom 1{x>=0}(1-p)^n, kept apart
/// so the jump at zero is available exactly.
struct MixtureParts {
  double continuous = 0.0;
  double atom = 0.0;
  double total() const noexcept { return continuous + atom; }
};

MixtureParts mixture_cdf_parts(const BwmProblem& prob, double x, PerK per_k);
double mixture_cdf(const BwmProblem& prob, double x, PerK per_k);
/// lim_{y -> x-} of mixture_cdf (differs from mixture_cdf only at x = 0).
double mixture_cdf_left_limit(const BwmProblem& prob, double x, PerK per_k);

/// Grid evaluation. Serial runs the pointwise reference above; Parallel
/// precomputes pmf and per-k tables once and splits the grid across threads.
std::vector<double> mixture_cdf_grid(const BwmProblem& prob, std::span<const double> grid, PerK per_k,
                                     Execution exec = Execution::Parallel);

/// p*_k = p^{-k/2} sum_{j + 2i = k} C_{j/2, i} p_j, k = 1..q-2.
ExpansionSet star_polynomials(const CumulantSet& c, int q, double p);

/// Phi(x) + sum_j n^{-j/2} p*_j(x) phi(x), unclamped.
double bwm_edgeworth_cdf(const BwmProblem& prob, double x);
std::vector<double> bwm_edgeworth_cdf_grid(const BwmProblem& prob, std::span<const double> grid);

/// Evaluation grid lo:hi:step. points() also carries x = -1e-9 and x = 0 so both
/// sides of the jump at zero are represented.
struct GridSpec {
  double lo = -8.0;
  double hi = 8.0;
  double step = 0.01;

  static GridSpec parse(std::string_view text);  // "lo:hi:step"
  std::string to_string() const;
  std::vector<double> points() const;
};

struct SweepRow {
  long n = 0;
  double sup_error = 0.0;
  double scaled_error = 0.0;  ///< sup_error * n^{(q-1)/2}
  double argmax = 0.0;
};

struct UniformErrorReport {
  std::vector<double> grid;
  double sup_error = 0.0;
  double argmax = 0.0;
  std::vector<SweepRow> rows;
  std::optional<double> fitted_slope;
};

/// max_x |f(x) - g(x)| over a shared grid; GridMismatch on length disagreement.
UniformErrorReport sup_error(std::span<const double> f, std::span<const double> g, std::span<const double> grid);

struct SweepSpec {
  DistributionSpec dist;
  double p = 0.5;
  int q = 4;
  std::vector<long> sizes;
  PerK truth = PerK::Edgeworth;
  std::vector<double> grid;
};

/// Sup error between mixture_cdf(truth) and bwm_edgeworth_cdf for each n, with a
/// least-squares log-log slope when three or more sizes are given. The top-level
/// sup_error/argmax describe the largest n.
UniformErrorReport sweep_sup_error(const SweepSpec& spec);

/// One sweep entry from precomputed truth/approximation curves.
SweepRow sweep_row(long n, int q, std::span<const double> truth, std::span<const double> approx,
                   std::span<const double> grid);

/// Sets the top-level fields from the last row and fits the log-log slope (>= 3 rows).
void fit_sweep(UniformErrorReport& report);

}  // namespace bwedge
