#pragma once

// Lattice / semi-lattice classification and characteristic-function scans.
//
// Exact atoms are Q-linear combinations of the basis {1, e, pi, sqrt2, ln2},
// which is treated as linearly independent over Q. A 1-D support is lattice
// exactly when all differences from the minimum atom are rational multiples of
// one another; with that assumption {e, 3, pi} is decided NonLattice exactly.
// Plain floating atoms only ever get resolution-qualified answers.

#include <array>
#include <boost/rational.hpp>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bwedge/distributions.hpp"

namespace bwedge {

enum class Constant { One, E, Pi, Sqrt2, Ln2 };

class ExactReal {
 public:
  using Rational = boost::rational<long long>;
  static constexpr std::size_t kBasis = 5;

  ExactReal() = default;
  static ExactReal rational(long long num, long long den = 1);
  static ExactReal constant(Constant c, Rational coeff = Rational(1));
  /// "3", "-2/5", "0.25", "e", "pi", "sqrt2", "ln2", "3/2*pi". nullopt otherwise.
  static std::optional<ExactReal> parse(std::string_view text);

  double value() const;
  bool is_zero() const;
  const std::array<Rational, kBasis>& coords() const noexcept { return coords_; }

  /// r with *this == r * other, when it exists (other nonzero).
  std::optional<Rational> ratio_to(const ExactReal& other) const;

  ExactReal operator+(const ExactReal& o) const;
  ExactReal operator-(const ExactReal& o) const;
  ExactReal operator*(const Rational& r) const;
  bool operator==(const ExactReal& o) const = default;

  std::string to_string() const;

 private:
  std::array<Rational, kBasis> coords_{};
};

/// A support point with an optional exact representation.
struct Atom {
  std::optional<ExactReal> exact;
  double value = 0.0;

  static Atom of(const ExactReal& v) { return Atom{v, v.value()}; }
  static Atom approx(double v) { return Atom{std::nullopt, v}; }
  /// Exact when ExactReal::parse accepts the text, floating otherwise.
  static Atom parse(std::string_view text);
};

struct Atoms1D {
  std::vector<Atom> atoms;
  std::vector<double> probs;
};
struct AtomsND {
  std::vector<std::vector<Atom>> vectors;
  std::vector<double> probs;
};
/// X = coeffs * W for a scalar continuous W.
struct LinearImage {
  std::vector<double> coeffs;
  DistributionSpec base;
};
/// The pair (Y T, T), T ~ Bernoulli(p) independent of Y.
struct BernoulliGated {
  DistributionSpec inner;
  double p = 0.5;
};

struct SupportSpec {
  std::variant<Atoms1D, AtomsND, LinearImage, BernoulliGated> kind;

  int dimension() const;
  /// Finite discrete law as a floating 1-D support.
  static SupportSpec from_distribution(const DistributionSpec& d);
};

enum class Verdict { Lattice, SemiLattice, NonLattice, Unresolved };
std::string_view to_string(Verdict v);

struct LatticeVerdict {
  Verdict verdict = Verdict::Unresolved;
  std::vector<double> direction;  ///< t*; empty for 1-D verdicts
  double offset = 0.0;            ///< x0
  double span = 0.0;              ///< delta >= 0; 0 is the degenerate (constant) lattice
  std::string evidence;
};

struct LatticeOptions {
  long long denominator_bound = 1000000;  ///< continued-fraction bound for floating atoms
  int height_bound = 50;                  ///< max |component| of searched integer directions
};

/// 1-D lattice test. EmptySupport when no atom carries positive mass.
LatticeVerdict lattice_check_1d(std::span<const Atom> atoms, std::span<const double> probs,
                                const LatticeOptions& options = {});

/// Searches a direction t* along which the support projects onto a lattice.
/// Never returns NonLattice for d > 1; an exhausted search is Unresolved.
LatticeVerdict semilattice_search(const SupportSpec& s, const LatticeOptions& options = {});

using Law = std::variant<SupportSpec, DistributionSpec>;

/// |E exp(i t . X)|; UnsupportedFamily when no closed form exists.
double char_fn_modulus(const Law& law, std::span<const double> t);

struct ScanReport {
  double max_tail_modulus = 0.0;
  double argmax_r = 0.0;
  std::size_t samples = 0;
  std::optional<double> span;             ///< lattice span of the projection, when known
  std::optional<double> detected_period;  ///< 2 pi / span, set when periodicity was confirmed
  double period_deviation = 0.0;          ///< max ||psi(r)| - |psi(r + period)|| on the grid
  bool semilattice_certified = false;     ///< some |psi(r t*)| = 1 (within 1e-12) at r != 0
  std::string evidence;
};

/// Samples |psi(r t*)| for r in [r_max/2, r_max]. When the projection t*.X is
/// lattice with span delta > 0 (given, or inferred from the support) the grid is
/// augmented with the resonances 2 pi m / delta and periodicity is tested.
ScanReport cramer_scan(const Law& law, std::span<const double> direction, double r_max, double step = 0.01,
                       std::optional<double> span = std::nullopt);

}  // namespace bwedge
