#pragma once

#include <complex>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bwedge {

struct Exponential {
  double rate = 1.0;
};
struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};
struct Gamma {
  double shape = 1.0;
  double scale = 1.0;
};
struct LogNormal {
  double log_mean = 0.0;
  double log_sd = 1.0;
};
struct Normal {
  double mean = 0.0;
  double sd = 1.0;
};
/// Finite-support law; accepted only by the lattice diagnostics.
struct FiniteDiscrete {
  std::vector<double> atoms;
  std::vector<double> probs;
};

using FamilyParams = std::variant<Exponential, Uniform, Gamma, LogNormal, Normal, FiniteDiscrete>;

enum class Family { Exponential, Uniform, Gamma, LogNormal, Normal, FiniteDiscrete };

/// Validated law of the summands Y. Immutable after construction.
///
/// Text form (one line, whitespace-separated key=value pairs):
///   family=exponential rate=1
///   family=uniform lo=0 hi=1
///   family=gamma shape=4 scale=1
///   family=lognormal logmean=0 logsd=0.5
///   family=normal mean=0 sd=1
///   family=discrete atoms=0,1 probs=0.7,0.3
class DistributionSpec {
 public:
  /// Throws IllegalParameter when a parameter leaves the family's domain.
  explicit DistributionSpec(FamilyParams params);

  static DistributionSpec parse(std::string_view text);
  std::string to_string() const;

  Family family() const noexcept { return static_cast<Family>(params_.index()); }
  std::string_view family_name() const noexcept;
  const FamilyParams& params() const noexcept { return params_; }

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double sd() const noexcept;

  /// Zero variance: constructible, but rejected by every expansion operation.
  bool degenerate() const noexcept { return variance_ == 0.0; }
  /// Absolutely continuous families, which are never semi-lattice.
  bool is_continuous() const noexcept { return family() != Family::FiniteDiscrete; }
  /// True when the k-fold standardized mean has a closed-form CDF.
  bool has_mean_cdf_oracle() const noexcept;

  template <class Engine>
  double sample(Engine& engine) const;

 private:
  FamilyParams params_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

DistributionSpec make_distribution(FamilyParams params);

/// Standardized moment data feeding the Edgeworth polynomials: entry j (3 <= j <= q)
/// is the j-th standardized cumulant, so lambda(3) is the skewness and
/// lambda(4) the excess kurtosis.
class CumulantSet {
 public:
  /// values[0] is lambda_3; q = values.size() + 2.
  explicit CumulantSet(std::vector<double> values);

  static CumulantSet gaussian(int q);

  int order() const noexcept { return static_cast<int>(values_.size()) + 2; }
  double lambda(int j) const;

 private:
  std::vector<double> values_;
};

/// Closed-form standardized cumulants up to order q (3 <= q <= 4).
CumulantSet standardized_moments(const DistributionSpec& d, int q);

/// P(sqrt(k) (mean of k draws - mu) / sigma <= x) in closed form.
/// Exponential and Gamma reduce to a regularized incomplete gamma; Normal to Phi.
double exact_standardized_mean_cdf(const DistributionSpec& d, long k, double x);

/// E[exp(i t Y)]. LogNormal has no closed form and raises UnsupportedFamily.
std::complex<double> characteristic_function(const DistributionSpec& d, double t);

template <class Engine>
double DistributionSpec::sample(Engine& engine) const {
  return std::visit(
      [&engine](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return std::exponential_distribution<double>(f.rate)(engine);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return std::uniform_real_distribution<double>(f.lo, f.hi)(engine);
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return std::gamma_distribution<double>(f.shape, f.scale)(engine);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return std::lognormal_distribution<double>(f.log_mean, f.log_sd)(engine);
        } else if constexpr (std::is_same_v<T, Normal>) {
          return std::normal_distribution<double>(f.mean, f.sd)(engine);
        } else {
          std::discrete_distribution<std::size_t> pick(f.probs.begin(), f.probs.end());
          return f.atoms[pick(engine)];
        }
      },
      params_);
}

}  // namespace bwedge
