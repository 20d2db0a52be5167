#include "bwedge/bwm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "bwedge/error.hpp"
#include "bwedge/numeric.hpp"

namespace bwedge {
namespace {

// Sums over k beyond this size drop terms whose mass is below kPruneMass.
constexpr long kFullSumLimit = 100000;
constexpr double kPruneMass = 1e-18;

bool keep_term(long n, double mass) {
  if (mass == 0.0) return false;
  return n <= kFullSumLimit || mass >= kPruneMass;
}

double atom_mass(const BinomialParams& b) {
  return std::pow(1.0 - b.p, static_cast<double>(b.n));
}

// Coefficients of f_alpha expansions. p = 1 is admitted here: N = n surely and
// every correction vanishes.
std::vector<double> expansion_coefficients(double alpha, int K, double p) {
  if (p == 1.0) {
    std::vector<double> c(static_cast<std::size_t>(K), 0.0);
    c[0] = 1.0;
    return c;
  }
  return inverse_moment_coefficients(alpha, K, p).C;
}

double per_k_cdf(const BwmProblem& prob, const ExpansionSet& edgeworth, long k, double x, PerK per_k) {
  if (per_k == PerK::OracleExact) return exact_standardized_mean_cdf(prob.dist, k, x);
  return edgeworth.cdf(static_cast<double>(k), x);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(ErrorCode::ConfigError, "malformed grid number '" + std::string(text) + "'");
  return v;
}

}  // namespace

BwmProblem make_bwm_problem(DistributionSpec dist, BinomialParams binom, int q) {
  if (q < 3 || q > 4) fail(ErrorCode::UnsupportedOrder, "expansion order q must be 3 or 4");
  if (dist.degenerate()) fail(ErrorCode::DegenerateDistribution, "summand variance is zero");
  if (!dist.is_continuous()) {
    fail(ErrorCode::IllegalParameter, "summands must be non semi-lattice; discrete laws are rejected");
  }
  auto cumulants = standardized_moments(dist, q);
  return BwmProblem{std::move(dist), binom, q, std::move(cumulants)};
}

MixtureParts mixture_cdf_parts(const BwmProblem& prob, double x, PerK per_k) {
  if (per_k == PerK::OracleExact && !prob.dist.has_mean_cdf_oracle()) {
    fail(ErrorCode::NoClosedFormOracle,
         "no exact per-k oracle for family " + std::string(prob.dist.family_name()));
  }
  const auto edgeworth = edgeworth_polynomials(prob.cumulants, prob.q);
  const long n = prob.binom.n;
  CompensatedSum acc;
  for (long k = 1; k <= n; ++k) {
    const double mass = binom_pmf(prob.binom, k);
    if (!keep_term(n, mass)) continue;
    acc.add(mass * per_k_cdf(prob, edgeworth, k, x, per_k));
  }
  MixtureParts parts;
  parts.continuous = acc.value();
  parts.atom = x >= 0.0 ? atom_mass(prob.binom) : 0.0;
  return parts;
}

double mixture_cdf(const BwmProblem& prob, double x, PerK per_k) {
  return mixture_cdf_parts(prob, x, per_k).total();
}

double mixture_cdf_left_limit(const BwmProblem& prob, double x, PerK per_k) {
  const auto parts = mixture_cdf_parts(prob, x, per_k);
  return x > 0.0 ? parts.total() : parts.continuous;
}

std::vector<double> mixture_cdf_grid(const BwmProblem& prob, std::span<const double> grid, PerK per_k,
                                     Execution exec) {
  std::vector<double> out(grid.size());
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = mixture_cdf(prob, grid[i], per_k);
    return out;
  }
  if (per_k == PerK::OracleExact && !prob.dist.has_mean_cdf_oracle()) {
    fail(ErrorCode::NoClosedFormOracle,
         "no exact per-k oracle for family " + std::string(prob.dist.family_name()));
  }

  const long n = prob.binom.n;
  const auto pmf = binom_pmf_table(prob.binom);
  std::vector<long> support;
  for (long k = 1; k <= n; ++k) {
    if (keep_term(n, pmf[static_cast<std::size_t>(k)])) support.push_back(k);
  }
  const auto edgeworth = edgeworth_polynomials(prob.cumulants, prob.q);
  // k^{-j/2} for each retained k and correction index j.
  const std::size_t terms = edgeworth.terms.size();
  std::vector<double> powers(support.size() * terms);
  for (std::size_t s = 0; s < support.size(); ++s) {
    for (std::size_t j = 0; j < terms; ++j) {
      powers[s * terms + j] = std::pow(static_cast<double>(support[s]), edgeworth.terms[j].exponent);
    }
  }
  const double atom = atom_mass(prob.binom);
  const auto count = static_cast<std::ptrdiff_t>(grid.size());

#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double x = grid[static_cast<std::size_t>(i)];
    CompensatedSum acc;
    if (per_k == PerK::OracleExact) {
      for (long k : support) acc.add(pmf[static_cast<std::size_t>(k)] * exact_standardized_mean_cdf(prob.dist, k, x));
    } else {
      const double phi = normal_pdf(x);
      const double cdf = normal_cdf(x);
      double poly[4] = {0.0, 0.0, 0.0, 0.0};
      for (std::size_t j = 0; j < terms; ++j) poly[j] = edgeworth.terms[j].poly(x);
      for (std::size_t s = 0; s < support.size(); ++s) {
        double correction = 0.0;
        for (std::size_t j = 0; j < terms; ++j) correction += powers[s * terms + j] * poly[j];
        acc.add(pmf[static_cast<std::size_t>(support[s])] * (cdf + correction * phi));
      }
    }
    out[static_cast<std::size_t>(i)] = acc.value() + (x >= 0.0 ? atom : 0.0);
  }
  return out;
}

ExpansionSet star_polynomials(const CumulantSet& c, int q, double p) {
  if (q < 3 || q > 4) fail(ErrorCode::UnsupportedOrder, "starred polynomials implemented for q in [3,4]");
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorCode::IllegalParameter, "p must lie in (0, 1]");
  const auto base = edgeworth_polynomials(c, q);
  const int max_j = q - 2;

  // Coefficient tables C_{j/2, 0..K_j-1} with K_j = q - 2 + ceil(j/2).
  std::vector<std::vector<double>> coeffs;
  for (int j = 1; j <= max_j; ++j) {
    coeffs.push_back(expansion_coefficients(j / 2.0, q - 2 + (j + 1) / 2, p));
  }

  ExpansionSet star;
  star.q = q;
  for (int k = 1; k <= max_j; ++k) {
    Polynomial poly;
    for (int j = k % 2 == 0 ? 2 : 1; j <= k; j += 2) {
      const int i = (k - j) / 2;
      const double cji = coeffs[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)];
      poly += cji * base.terms[static_cast<std::size_t>(j - 1)].poly;
    }
    star.terms.push_back({-k / 2.0, std::pow(p, -k / 2.0) * poly});
  }
  return star;
}

double bwm_edgeworth_cdf(const BwmProblem& prob, double x) {
  if (prob.dist.degenerate()) fail(ErrorCode::DegenerateDistribution, "summand variance is zero");
  return star_polynomials(prob.cumulants, prob.q, prob.binom.p).cdf(static_cast<double>(prob.binom.n), x);
}

std::vector<double> bwm_edgeworth_cdf_grid(const BwmProblem& prob, std::span<const double> grid) {
  if (prob.dist.degenerate()) fail(ErrorCode::DegenerateDistribution, "summand variance is zero");
  const auto star = star_polynomials(prob.cumulants, prob.q, prob.binom.p);
  const double n = static_cast<double>(prob.binom.n);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = star.cdf(n, grid[i]);
  return out;
}

GridSpec GridSpec::parse(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos) {
    fail(ErrorCode::ConfigError, "grid must be lo:hi:step, got '" + std::string(text) + "'");
  }
  GridSpec g{parse_number(text.substr(0, a)), parse_number(text.substr(a + 1, b - a - 1)),
             parse_number(text.substr(b + 1))};
  if (!(g.lo < g.hi) || !(g.step > 0.0)) fail(ErrorCode::ConfigError, "grid needs lo < hi and step > 0");
  return g;
}

std::string GridSpec::to_string() const {
  auto fmt = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  return fmt(lo) + ":" + fmt(hi) + ":" + fmt(step);
}

std::vector<double> GridSpec::points() const {
  const auto steps = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(steps) + 3);
  for (long i = 0; i <= steps; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    // Snap values that should be exactly zero but picked up rounding.
    pts.push_back(std::abs(x) < 1e-12 * step ? 0.0 : x);
  }
  for (double jump : {-1e-9, 0.0}) {
    if (jump >= lo && jump <= hi) pts.push_back(jump);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

UniformErrorReport sup_error(std::span<const double> f, std::span<const double> g, std::span<const double> grid) {
  if (f.size() != g.size() || f.size() != grid.size()) fail(ErrorCode::GridMismatch, "curves and grid differ in length");
  if (grid.empty()) fail(ErrorCode::GridMismatch, "empty grid");
  UniformErrorReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.sup_error = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double diff = std::abs(f[i] - g[i]);
    if (diff > report.sup_error) {
      report.sup_error = diff;
      report.argmax = grid[i];
    }
  }
  return report;
}

SweepRow sweep_row(long n, int q, std::span<const double> truth, std::span<const double> approx,
                   std::span<const double> grid) {
  const auto single = sup_error(truth, approx, grid);
  SweepRow row;
  row.n = n;
  row.sup_error = single.sup_error;
  row.argmax = single.argmax;
  row.scaled_error = single.sup_error * std::pow(static_cast<double>(n), (q - 1) / 2.0);
  return row;
}

void fit_sweep(UniformErrorReport& report) {
  if (report.rows.empty()) return;
  report.sup_error = report.rows.back().sup_error;
  report.argmax = report.rows.back().argmax;
  report.fitted_slope.reset();
  if (report.rows.size() < 3) return;
  std::vector<double> sizes, errors;
  for (const auto& row : report.rows) {
    sizes.push_back(static_cast<double>(row.n));
    errors.push_back(row.sup_error);
  }
  report.fitted_slope = log_log_slope(sizes, errors);
}

UniformErrorReport sweep_sup_error(const SweepSpec& spec) {
  if (spec.sizes.empty()) fail(ErrorCode::IllegalParameter, "sweep needs at least one size");
  for (std::size_t i = 1; i < spec.sizes.size(); ++i) {
    if (spec.sizes[i] <= spec.sizes[i - 1]) fail(ErrorCode::IllegalParameter, "sweep sizes must be strictly increasing");
  }
  UniformErrorReport report;
  report.grid = spec.grid;
  for (long n : spec.sizes) {
    const auto prob = make_bwm_problem(spec.dist, BinomialParams(n, spec.p), spec.q);
    const auto truth = mixture_cdf_grid(prob, spec.grid, spec.truth);
    const auto approx = bwm_edgeworth_cdf_grid(prob, spec.grid);
    report.rows.push_back(sweep_row(n, spec.q, truth, approx, spec.grid));
  }
  fit_sweep(report);
  return report;
}

}  // namespace bwedge
