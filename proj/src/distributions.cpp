#include "bwedge/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "bwedge/edgeworth.hpp"
#include "bwedge/error.hpp"
#include "bwedge/special.hpp"

namespace bwedge {
namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorCode::ConfigError, "malformed number for '" + std::string(key) + "': " + std::string(text));
  }
  return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_double(key, piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::IllegalParameter, what);
}

}  // namespace

DistributionSpec::DistributionSpec(FamilyParams params) : params_(std::move(params)) {
  std::visit(
      [this](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          require(f.rate > 0.0 && std::isfinite(f.rate), "exponential rate must be > 0");
          mean_ = 1.0 / f.rate;
          variance_ = 1.0 / (f.rate * f.rate);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          require(std::isfinite(f.lo) && std::isfinite(f.hi) && f.lo < f.hi, "uniform needs lo < hi");
          mean_ = 0.5 * (f.lo + f.hi);
          variance_ = (f.hi - f.lo) * (f.hi - f.lo) / 12.0;
        } else if constexpr (std::is_same_v<T, Gamma>) {
          require(f.shape > 0.0 && std::isfinite(f.shape), "gamma shape must be > 0");
          require(f.scale > 0.0 && std::isfinite(f.scale), "gamma scale must be > 0");
          mean_ = f.shape * f.scale;
          variance_ = f.shape * f.scale * f.scale;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          require(std::isfinite(f.log_mean), "lognormal logmean must be finite");
          require(f.log_sd > 0.0 && std::isfinite(f.log_sd), "lognormal logsd must be > 0");
          const double s2 = f.log_sd * f.log_sd;
          mean_ = std::exp(f.log_mean + 0.5 * s2);
          variance_ = std::expm1(s2) * std::exp(2.0 * f.log_mean + s2);
        } else if constexpr (std::is_same_v<T, Normal>) {
          require(std::isfinite(f.mean), "normal mean must be finite");
          require(f.sd > 0.0 && std::isfinite(f.sd), "normal sd must be > 0");
          mean_ = f.mean;
          variance_ = f.sd * f.sd;
        } else {
          require(!f.atoms.empty(), "discrete law needs at least one atom");
          require(f.atoms.size() == f.probs.size(), "atoms and probs differ in length");
          double total = 0.0;
          for (double q : f.probs) {
            require(q >= 0.0, "discrete probabilities must be nonnegative");
            total += q;
          }
          require(std::abs(total - 1.0) <= 1e-12, "discrete probabilities must sum to 1");
          std::set<double> distinct(f.atoms.begin(), f.atoms.end());
          require(distinct.size() == f.atoms.size(), "discrete atoms must be distinct");
          for (std::size_t i = 0; i < f.atoms.size(); ++i) mean_ += f.probs[i] * f.atoms[i];
          for (std::size_t i = 0; i < f.atoms.size(); ++i) {
            variance_ += f.probs[i] * (f.atoms[i] - mean_) * (f.atoms[i] - mean_);
          }
        }
      },
      params_);
}

DistributionSpec make_distribution(FamilyParams params) { return DistributionSpec(std::move(params)); }

double DistributionSpec::sd() const noexcept { return std::sqrt(variance_); }

std::string_view DistributionSpec::family_name() const noexcept {
  switch (family()) {
    case Family::Exponential: return "exponential";
    case Family::Uniform: return "uniform";
    case Family::Gamma: return "gamma";
    case Family::LogNormal: return "lognormal";
    case Family::Normal: return "normal";
    case Family::FiniteDiscrete: return "discrete";
  }
  return "unknown";
}

bool DistributionSpec::has_mean_cdf_oracle() const noexcept {
  const auto f = family();
  return f == Family::Exponential || f == Family::Gamma || f == Family::Normal;
}

std::string DistributionSpec::to_string() const {
  std::string out = "family=" + std::string(family_name());
  std::visit(
      [&out](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          out += " rate=" + format_double(f.rate);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          out += " lo=" + format_double(f.lo) + " hi=" + format_double(f.hi);
        } else if constexpr (std::is_same_v<T, Gamma>) {
          out += " shape=" + format_double(f.shape) + " scale=" + format_double(f.scale);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          out += " logmean=" + format_double(f.log_mean) + " logsd=" + format_double(f.log_sd);
        } else if constexpr (std::is_same_v<T, Normal>) {
          out += " mean=" + format_double(f.mean) + " sd=" + format_double(f.sd);
        } else {
          out += " atoms=" + format_list(f.atoms) + " probs=" + format_list(f.probs);
        }
      },
      params_);
  return out;
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  std::map<std::string, std::string, std::less<>> fields;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorCode::ConfigError, "expected key=value, got '" + token + "'");
    auto key = token.substr(0, eq);
    if (fields.contains(key)) fail(ErrorCode::ConfigError, "duplicate key '" + key + "'");
    fields.emplace(std::move(key), token.substr(eq + 1));
  }
  const auto family = fields.find("family");
  if (family == fields.end()) fail(ErrorCode::ConfigError, "distribution needs family=<name>");

  std::set<std::string, std::less<>> allowed{"family"};
  auto num = [&](const char* key, double fallback) {
    allowed.insert(key);
    auto it = fields.find(key);
    return it == fields.end() ? fallback : parse_double(key, it->second);
  };
  auto list = [&](const char* key) {
    allowed.insert(key);
    auto it = fields.find(key);
    if (it == fields.end()) fail(ErrorCode::ConfigError, std::string("discrete law needs ") + key);
    return parse_list(key, it->second);
  };

  const std::string& name = family->second;
  FamilyParams params;
  if (name == "exponential") {
    params = Exponential{num("rate", 1.0)};
  } else if (name == "uniform") {
    params = Uniform{num("lo", 0.0), num("hi", 1.0)};
  } else if (name == "gamma") {
    params = Gamma{num("shape", 1.0), num("scale", 1.0)};
  } else if (name == "lognormal") {
    params = LogNormal{num("logmean", 0.0), num("logsd", 1.0)};
  } else if (name == "normal") {
    params = Normal{num("mean", 0.0), num("sd", 1.0)};
  } else if (name == "discrete") {
    params = FiniteDiscrete{list("atoms"), list("probs")};
  } else {
    fail(ErrorCode::ConfigError, "unknown family '" + name + "'");
  }
  for (const auto& [key, value] : fields) {
    if (!allowed.contains(key)) fail(ErrorCode::ConfigError, "unknown key '" + key + "' for family " + name);
  }
  return DistributionSpec(std::move(params));
}

CumulantSet::CumulantSet(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) fail(ErrorCode::UnsupportedOrder, "cumulant set needs order q >= 3");
  if (values_.size() >= 2) {
    const double l3 = values_[0];
    const double l4 = values_[1];
    if (l4 < l3 * l3 - 2.0 - 1e-12) {
      fail(ErrorCode::IllegalParameter, "infeasible moments: excess kurtosis below skewness^2 - 2");
    }
  }
}

CumulantSet CumulantSet::gaussian(int q) {
  if (q < 3) fail(ErrorCode::UnsupportedOrder, "cumulant set needs order q >= 3");
  return CumulantSet(std::vector<double>(static_cast<std::size_t>(q - 2), 0.0));
}

double CumulantSet::lambda(int j) const {
  if (j < 3 || j > order()) {
    fail(ErrorCode::UnsupportedOrder, "cumulant lambda_" + std::to_string(j) + " not present");
  }
  return values_[static_cast<std::size_t>(j - 3)];
}

CumulantSet standardized_moments(const DistributionSpec& d, int q) {
  if (q < 3 || q > 4) fail(ErrorCode::UnsupportedOrder, "standardized moments implemented for q in [3,4]");
  if (!d.is_continuous()) fail(ErrorCode::IllegalParameter, "discrete laws are only accepted by the lattice diagnostics");
  double skew = 0.0;
  double exkurt = 0.0;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          skew = 2.0;
          exkurt = 6.0;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          skew = 0.0;
          exkurt = -1.2;
        } else if constexpr (std::is_same_v<T, Gamma>) {
          skew = 2.0 / std::sqrt(f.shape);
          exkurt = 6.0 / f.shape;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          const double s2 = f.log_sd * f.log_sd;
          const double w = std::exp(s2);
          skew = (w + 2.0) * std::sqrt(std::expm1(s2));
          exkurt = std::exp(4.0 * s2) + 2.0 * std::exp(3.0 * s2) + 3.0 * std::exp(2.0 * s2) - 6.0;
        } else if constexpr (std::is_same_v<T, Normal>) {
          skew = 0.0;
          exkurt = 0.0;
        }
      },
      d.params());
  if (q == 3) return CumulantSet({skew});
  return CumulantSet({skew, exkurt});
}

double exact_standardized_mean_cdf(const DistributionSpec& d, long k, double x) {
  if (k < 1) fail(ErrorCode::IllegalParameter, "sample size k must be >= 1");
  if (std::isnan(x)) fail(ErrorCode::IllegalParameter, "x is NaN");
  const double kk = static_cast<double>(k);
  switch (d.family()) {
    case Family::Normal:
      return normal_cdf(x);
    case Family::Exponential:
    case Family::Gamma: {
      // Sum of k draws is Gamma(k * shape); standardize in units of the scale.
      const double shape = d.family() == Family::Gamma ? std::get<Gamma>(d.params()).shape : 1.0;
      const double total_shape = kk * shape;
      if (x == std::numeric_limits<double>::infinity()) return 1.0;
      const double arg = total_shape + x * std::sqrt(total_shape);
      if (!(arg > 0.0)) return 0.0;
      return special::gamma_p(total_shape, arg);
    }
    default:
      fail(ErrorCode::NoClosedFormOracle,
           "no closed-form standardized-mean CDF for family " + std::string(d.family_name()));
  }
}

std::complex<double> characteristic_function(const DistributionSpec& d, double t) {
  using namespace std::complex_literals;
  return std::visit(
      [t](const auto& f) -> std::complex<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return f.rate / (f.rate - 1i * t);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          const double half = 0.5 * t * (f.hi - f.lo);
          const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
          return std::exp(1i * (0.5 * t * (f.hi + f.lo))) * sinc;
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return std::pow(1.0 - 1i * (f.scale * t), -f.shape);
        } else if constexpr (std::is_same_v<T, Normal>) {
          return std::exp(1i * (f.mean * t) - 0.5 * f.sd * f.sd * t * t);
        } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          std::complex<double> acc = 0.0;
          for (std::size_t i = 0; i < f.atoms.size(); ++i) acc += f.probs[i] * std::exp(1i * (t * f.atoms[i]));
          return acc;
        } else {
          fail(ErrorCode::UnsupportedFamily, "lognormal characteristic function has no closed form");
        }
      },
      d.params());
}

}  // namespace bwedge
