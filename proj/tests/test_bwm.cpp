#include <algorithm>
#include <cmath>
#include <vector>

#include "bwedge/bwm.hpp"
#include "catch_amalgamated.hpp"
#include "test_support.hpp"

using namespace bwedge;
using bwedge::testing::code_of;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
BwmProblem exponential_problem(long n, double p, int q) {
  return make_bwm_problem(DistributionSpec(Exponential{1.0}), BinomialParams(n, p), q);
}
}  // namespace

TEST_CASE("problem validation", "[bwm]") {
  const DistributionSpec e(Exponential{1.0});
  CHECK(code_of([&] { make_bwm_problem(e, BinomialParams(10, 0.5), 5); }) == ErrorCode::UnsupportedOrder);
  CHECK(code_of([&] { make_bwm_problem(e, BinomialParams(10, 0.5), 2); }) == ErrorCode::UnsupportedOrder);
  CHECK(code_of([] { make_bwm_problem(DistributionSpec::parse("family=discrete atoms=2 probs=1"), BinomialParams(10, 0.5), 4); }) ==
        ErrorCode::DegenerateDistribution);
  CHECK(code_of([] {
          make_bwm_problem(DistributionSpec::parse("family=discrete atoms=0,1 probs=0.5,0.5"), BinomialParams(10, 0.5), 4);
        }) == ErrorCode::IllegalParameter);
  const auto u = make_bwm_problem(DistributionSpec(Uniform{0.0, 1.0}), BinomialParams(10, 0.5), 4);
  CHECK(code_of([&] { mixture_cdf(u, 0.0, PerK::OracleExact); }) == ErrorCode::NoClosedFormOracle);
}

TEST_CASE("normal summands give a closed-form mixture", "[bwm][mixture]") {
  const auto prob = make_bwm_problem(DistributionSpec(Normal{2.0, 3.0}), BinomialParams(12, 0.25), 4);
  const double atom = std::pow(0.75, 12);
  for (double x : {-2.0, -1e-9, 0.0, 0.4, 3.0}) {
    const double expected = (1.0 - atom) * normal_cdf(x) + (x >= 0.0 ? atom : 0.0);
    CHECK_THAT(mixture_cdf(prob, x, PerK::OracleExact), WithinAbs(expected, 1e-14));
    CHECK_THAT(mixture_cdf(prob, x, PerK::Edgeworth), WithinAbs(expected, 1e-14));
  }
  // p = 1: N = n and Z is exactly standard normal
  const auto full = make_bwm_problem(DistributionSpec(Normal{0.0, 1.0}), BinomialParams(9, 1.0), 3);
  CHECK_THAT(mixture_cdf(full, 0.8, PerK::OracleExact), WithinAbs(normal_cdf(0.8), 1e-15));
}

TEST_CASE("jump at zero equals the empty-sample mass", "[bwm][mixture]") {
  for (long n : {10L, 100L}) {
    for (double p : {0.1, 0.5}) {
      const auto prob = exponential_problem(n, p, 4);
      const double atom = std::pow(1.0 - p, static_cast<double>(n));
      const auto parts = mixture_cdf_parts(prob, 0.0, PerK::OracleExact);
      CHECK(parts.atom == atom);
      CHECK_THAT(mixture_cdf(prob, 0.0, PerK::OracleExact) - mixture_cdf_left_limit(prob, 0.0, PerK::OracleExact),
                 WithinAbs(atom, 1e-15));
      CHECK(mixture_cdf_left_limit(prob, 0.5, PerK::OracleExact) == mixture_cdf(prob, 0.5, PerK::OracleExact));
    }
  }
}

TEST_CASE("oracle mixture is a distribution function", "[bwm][mixture]") {
  const auto prob = exponential_problem(60, 0.3, 4);
  const auto grid = GridSpec{-8.0, 8.0, 0.05}.points();
  const auto f = mixture_cdf_grid(prob, grid, PerK::OracleExact);
  CHECK(std::is_sorted(f.begin(), f.end()));
  CHECK(f.front() < 1e-12);
  CHECK(f.back() > 1.0 - 1e-6);
}

TEST_CASE("parallel grid kernel agrees with the serial reference", "[bwm][parallel]") {
  const auto grid = GridSpec{-5.0, 5.0, 0.1}.points();
  for (PerK mode : {PerK::OracleExact, PerK::Edgeworth}) {
    const auto prob = exponential_problem(300, 0.4, 4);
    const auto s = mixture_cdf_grid(prob, grid, mode, Execution::Serial);
    const auto p = mixture_cdf_grid(prob, grid, mode, Execution::Parallel);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK_THAT(p[i], WithinAbs(s[i], 1e-15));
  }
  // beyond the pruning threshold
  const auto big = exponential_problem(200000, 0.5, 4);
  const std::vector<double> few{-1.0, 0.0, 1.0};
  const auto s = mixture_cdf_grid(big, few, PerK::Edgeworth, Execution::Serial);
  const auto p = mixture_cdf_grid(big, few, PerK::Edgeworth, Execution::Parallel);
  for (std::size_t i = 0; i < few.size(); ++i) CHECK_THAT(p[i], WithinAbs(s[i], 1e-14));
}

TEST_CASE("starred polynomials", "[bwm][star]") {
  const auto c = standardized_moments(DistributionSpec(Exponential{1.0}), 4);
  // p = 1 collapses to the ordinary Edgeworth polynomials
  const auto star = star_polynomials(c, 4, 1.0);
  const auto base = edgeworth_polynomials(c, 4);
  for (double x : {-1.5, 0.2, 2.0}) {
    CHECK_THAT(star.terms[0].poly(x), WithinAbs(base.terms[0].poly(x), 1e-15));
    CHECK_THAT(star.terms[1].poly(x), WithinAbs(base.terms[1].poly(x), 1e-15));
  }
  // p*_1 = p^{-1/2} p_1, p*_2 = p^{-1} p_2
  const auto s3 = star_polynomials(c, 4, 0.3);
  CHECK_THAT(s3.terms[0].poly(1.7), WithinRel(base.terms[0].poly(1.7) / std::sqrt(0.3), 1e-14));
  CHECK_THAT(s3.terms[1].poly(1.7), WithinRel(base.terms[1].poly(1.7) / 0.3, 1e-14));
  CHECK(code_of([&] { star_polynomials(c, 4, 0.0); }) == ErrorCode::IllegalParameter);
}

TEST_CASE("closed form with gaussian summands is Phi", "[bwm][star]") {
  const auto prob = make_bwm_problem(DistributionSpec(Normal{0.0, 1.0}), BinomialParams(40, 0.3), 4);
  for (double x : {-2.0, 0.0, 1.0}) CHECK(bwm_edgeworth_cdf(prob, x) == normal_cdf(x));
}

TEST_CASE("closed form tracks the edgeworth mixture at the theorem's rate", "[bwm][order]") {
  SweepSpec spec{DistributionSpec(Exponential{1.0}), 0.5, 4, {50, 100, 200, 400, 800}, PerK::Edgeworth,
                 GridSpec{-6.0, 6.0, 0.02}.points()};
  const auto rep = sweep_sup_error(spec);
  REQUIRE(rep.fitted_slope);
  CHECK_THAT(*rep.fitted_slope, WithinAbs(-1.5, 0.2));
  CHECK(rep.rows.size() == 5);
  CHECK(rep.sup_error == rep.rows.back().sup_error);
}

TEST_CASE("sup error and sweep bookkeeping", "[bwm][sweep]") {
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const auto r = sup_error(std::vector<double>{0.0, 0.5, 1.0}, std::vector<double>{0.0, 0.2, 1.1}, grid);
  CHECK_THAT(r.sup_error, WithinAbs(0.3, 1e-15));
  CHECK(r.argmax == 1.0);
  CHECK(code_of([&] { sup_error(std::vector<double>{0.0}, std::vector<double>{0.0, 1.0}, grid); }) ==
        ErrorCode::GridMismatch);

  UniformErrorReport rep;
  for (long n : {10L, 20L, 40L}) {
    const double e = 1.0 / std::pow(static_cast<double>(n), 1.5);
    const std::vector<double> t{0.0}, a{e}, g{0.0};
    rep.rows.push_back(sweep_row(n, 4, t, a, g));
  }
  fit_sweep(rep);
  REQUIRE(rep.fitted_slope);
  CHECK_THAT(*rep.fitted_slope, WithinAbs(-1.5, 1e-12));
  CHECK_THAT(rep.rows[0].scaled_error, WithinRel(1.0, 1e-12));

  SweepSpec bad{DistributionSpec(Exponential{1.0}), 0.5, 4, {100, 50}, PerK::Edgeworth, grid};
  CHECK(code_of([&] { sweep_sup_error(bad); }) == ErrorCode::IllegalParameter);
}

TEST_CASE("grid specs", "[bwm][grid]") {
  const auto g = GridSpec::parse("-1:1:0.5");
  CHECK(g.lo == -1.0);
  CHECK(g.hi == 1.0);
  CHECK(g.to_string() == "-1:1:0.5");
  const auto pts = g.points();
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  CHECK(std::count(pts.begin(), pts.end(), 0.0) == 1);
  CHECK(std::count(pts.begin(), pts.end(), -1e-9) == 1);
  CHECK(pts.back() == 1.0);
  CHECK(code_of([] { GridSpec::parse("1:0:0.1"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { GridSpec::parse("0:1"); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { GridSpec::parse("0:1:x"); }) == ErrorCode::ConfigError);
}
