#include "bwedge/binomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "bwedge/error.hpp"
#include "bwedge/numeric.hpp"
#include "bwedge/special.hpp"

namespace bwedge {
namespace {

// Accumulate term(k) for k in [lo, hi], starting at `mode` and walking outward,
// so that the large terms enter the compensated sum first.
template <class Term>
double sum_from_mode(long lo, long hi, long mode, Term&& term) {
  mode = std::clamp(mode, lo, hi);
  CompensatedSum acc;
  acc.add(term(mode));
  for (long step = 1;; ++step) {
    const long left = mode - step;
    const long right = mode + step;
    if (left < lo && right > hi) break;
    if (left >= lo) acc.add(term(left));
    if (right <= hi) acc.add(term(right));
  }
  return acc.value();
}

long binomial_mode(const BinomialParams& b) {
  return static_cast<long>(std::floor((static_cast<double>(b.n) + 1.0) * b.p));
}

double pmf_unchecked(long n, double p, long k) {
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  if (k == 0) return std::exp(static_cast<double>(n) * std::log1p(-p));
  if (k == n) return std::exp(static_cast<double>(n) * std::log(p));
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double rest = nn - kk;
  const double lc = special::stirlerr(nn) - special::stirlerr(kk) - special::stirlerr(rest) -
                    special::bd0(kk, nn * p) - special::bd0(rest, nn * (1.0 - p));
  return std::exp(lc) * std::sqrt(nn / (2.0 * std::numbers::pi * kk * rest));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Polynomial in n with real coefficients, coeffs[r] multiplies n^r.
using NPoly = std::vector<double>;

NPoly mul(const NPoly& a, const NPoly& b) {
  NPoly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void add_scaled(NPoly& into, const NPoly& term, double scale) {
  if (term.size() > into.size()) into.resize(term.size(), 0.0);
  for (std::size_t i = 0; i < term.size(); ++i) into[i] += scale * term[i];
}

double choose(int m, int r) {
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * (m - r + i) / i;
  return out;
}

}  // namespace

BinomialParams::BinomialParams(long trials, double success) : n(trials), p(success) {
  if (n < 1) fail(ErrorCode::IllegalParameter, "binomial n must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorCode::IllegalParameter, "binomial p must lie in (0, 1]");
}

double binom_pmf(const BinomialParams& b, long k) {
  if (k < 0 || k > b.n) fail(ErrorCode::IndexOutOfRange, "pmf index outside [0, n]");
  return pmf_unchecked(b.n, b.p, k);
}

std::vector<double> binom_pmf_table(const BinomialParams& b) {
  std::vector<double> out(static_cast<std::size_t>(b.n) + 1);
  for (long k = 0; k <= b.n; ++k) out[static_cast<std::size_t>(k)] = pmf_unchecked(b.n, b.p, k);
  return out;
}

double bernoulli_sum(const BinomialParams& b, double alpha) {
  return sum_from_mode(1, b.n, binomial_mode(b), [&](long k) {
    return std::pow(static_cast<double>(k), alpha) * pmf_unchecked(b.n, b.p, k);
  });
}

double bound_o_rhs(const BinomialParams& b, double alpha) {
  const long m = b.n - 1;
  double expectation = 1.0;  // Binomial(0, p) is the point mass at 0
  if (m > 0) {
    const long mode = static_cast<long>(std::floor((static_cast<double>(m) + 1.0) * b.p));
    expectation = sum_from_mode(0, m, mode, [&](long k) {
      return std::pow(static_cast<double>(k + 1), alpha - 1.0) * pmf_unchecked(m, b.p, k);
    });
  }
  return b.mean() * expectation;
}

double inverse_moment(const BinomialParams& b, double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::IllegalParameter, "inverse moment order alpha must be > 0");
  return bernoulli_sum(b, -alpha);
}

double CoefficientTable::truncation(double np, std::optional<int> terms) const {
  const int count = terms.value_or(K);
  if (count < 0 || count > K) fail(ErrorCode::IndexOutOfRange, "truncation beyond table length");
  double acc = 0.0;
  for (int k = count - 1; k >= 0; --k) acc = acc / np + C[static_cast<std::size_t>(k)];
  return std::pow(np, -alpha) * acc;
}

std::string CoefficientTable::to_csv() const {
  std::string out = "alpha,k,C\n";
  for (int k = 0; k < K; ++k) {
    out += format_double(alpha) + "," + std::to_string(k) + "," + format_double(C[static_cast<std::size_t>(k)]) + "\n";
  }
  return out;
}

CoefficientTable inverse_moment_coefficients(double alpha, int K, double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::IllegalParameter, "coefficient table needs p in (0, 1)");
  if (K < 1 || K > 8) fail(ErrorCode::IllegalParameter, "coefficient count K must lie in [1, 8]");
  if (!(alpha > 0.0)) fail(ErrorCode::IllegalParameter, "inverse moment order alpha must be > 0");

  // Taylor order: the m-th term of (1 + delta)^{-alpha} first reaches (np)^{-ceil(m/2)}.
  const int M = 2 * K;

  // Bernoulli central moments, then cumulants (kappa_1 = 0 for the centered law).
  std::vector<double> central(static_cast<std::size_t>(M) + 1, 0.0);
  for (int r = 0; r <= M; ++r) {
    central[static_cast<std::size_t>(r)] = (1.0 - p) * std::pow(-p, r) + p * std::pow(1.0 - p, r);
  }
  std::vector<double> cumulant(static_cast<std::size_t>(M) + 1, 0.0);
  for (int r = 2; r <= M; ++r) {
    double c = central[static_cast<std::size_t>(r)];
    for (int i = 2; i <= r - 2; ++i) {
      c -= choose(r - 1, i - 1) * cumulant[static_cast<std::size_t>(i)] * central[static_cast<std::size_t>(r - i)];
    }
    cumulant[static_cast<std::size_t>(r)] = c;
  }

  // Binomial central moments as polynomials in n: kappa_r(n) = n c_r and
  // mu_m = sum_{i=1}^{m-1} C(m-1, i) kappa_{i+1} mu_{m-1-i}.
  std::vector<NPoly> mu(static_cast<std::size_t>(M) + 1);
  mu[0] = {1.0};
  mu[1] = {0.0};
  for (int m = 2; m <= M; ++m) {
    NPoly acc{0.0};
    for (int i = 1; i <= m - 1; ++i) {
      const NPoly kappa{0.0, cumulant[static_cast<std::size_t>(i + 1)]};
      add_scaled(acc, mul(kappa, mu[static_cast<std::size_t>(m - 1 - i)]), choose(m - 1, i));
    }
    mu[static_cast<std::size_t>(m)] = acc;
  }

  // E[(1+delta)^{-alpha}], delta = (N - np)/np: the n^r part of mu_m contributes
  // binom(-alpha, m) a_{m,r} p^{-r} at order (np)^{-(m-r)}.
  CoefficientTable table;
  table.alpha = alpha;
  table.K = K;
  table.p = p;
  table.C.assign(static_cast<std::size_t>(K), 0.0);
  double binom_neg_alpha = 1.0;
  for (int m = 0; m <= M; ++m) {
    if (m > 0) binom_neg_alpha *= (-alpha - (m - 1)) / m;
    const NPoly& poly = mu[static_cast<std::size_t>(m)];
    for (int r = 0; r < static_cast<int>(poly.size()); ++r) {
      const int order = m - r;
      if (order < 0 || order >= K) continue;
      table.C[static_cast<std::size_t>(order)] += binom_neg_alpha * poly[static_cast<std::size_t>(r)] * std::pow(p, -r);
    }
  }
  table.C[0] = 1.0;
  return table;
}

double kl_divergence_bernoulli(double delta, double p) {
  if (!(delta >= 0.0 && delta <= 1.0)) fail(ErrorCode::IllegalParameter, "delta must lie in [0, 1]");
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::IllegalParameter, "p must lie in (0, 1)");
  auto xlogy = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); };
  return xlogy(delta, p) + xlogy(1.0 - delta, 1.0 - p);
}

TailBound kl_tail_bound(const BinomialParams& b, std::optional<double> delta) {
  if (!(b.p < 1.0)) fail(ErrorCode::IllegalParameter, "tail bound needs p < 1");
  const double d = delta.value_or(b.p / 2.0);
  if (!(d > 0.0 && d < b.p)) fail(ErrorCode::IllegalParameter, "tail bound needs 0 < delta < p");
  const double nn = static_cast<double>(b.n);
  // delta * n can land a few ulps below an integer it equals mathematically.
  const long last = static_cast<long>(std::floor(d * nn * (1.0 + 1e-12)));
  TailBound out;
  out.exact_tail = last < 0 ? 0.0 : sum_from_mode(0, last, last, [&](long k) { return pmf_unchecked(b.n, b.p, k); });
  out.bound = std::exp(-nn * kl_divergence_bernoulli(d, b.p));
  return out;
}

MomentPowerReport moment_power_bound_check(const BinomialParams& b, double alpha, std::optional<double> delta) {
  if (!(b.p > 0.0 && b.p <= 0.5)) fail(ErrorCode::IllegalParameter, "moment power bound requires p in (0, 1/2]");
  const double nn = static_cast<double>(b.n);
  MomentPowerReport out;
  out.exact = sum_from_mode(0, b.n, binomial_mode(b), [&](long k) {
    return std::pow(static_cast<double>(k + 1), alpha) * pmf_unchecked(b.n, b.p, k);
  });
  if (alpha >= 0.0) {
    out.majorant = std::pow(nn + 1.0, alpha);
    return out;
  }
  out.delta = delta.value_or(b.p / 2.0);
  if (!(out.delta > 0.0 && out.delta < b.p)) fail(ErrorCode::IllegalParameter, "negative alpha needs 0 < delta < p");
  out.majorant = std::exp(-nn * kl_divergence_bernoulli(out.delta, b.p)) + std::pow(out.delta * nn + 1.0, alpha);
  return out;
}

}  // namespace bwedge
