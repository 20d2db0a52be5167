#include <cmath>
#include <vector>

#include "bwedge/distributions.hpp"
#include "bwedge/edgeworth.hpp"
#include "bwedge/numeric.hpp"
#include "catch_amalgamated.hpp"
#include "test_support.hpp"

using namespace bwedge;
using bwedge::testing::code_of;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("polynomial basics", "[poly]") {
  Polynomial p({1.0, 0.0, -2.0, 0.0});
  CHECK(p.degree() == 2);
  CHECK(p(3.0) == -17.0);
  CHECK(Polynomial().is_zero());
  CHECK(Polynomial({0.0, 0.0}).degree() == -1);
  p += Polynomial({0.0, 1.0});
  CHECK(p(2.0) == -5.0);
  CHECK((0.5 * p)(2.0) == -2.5);
  CHECK(Polynomial({1.0, -0.5}).to_string() == "[1, -0.5]");
}

TEST_CASE("edgeworth polynomials have the textbook coefficients", "[edgeworth]") {
  const CumulantSet c({2.0, 6.0});  // exponential
  const auto set = edgeworth_polynomials(c, 4);
  REQUIRE(set.terms.size() == 2);
  CHECK(set.terms[0].exponent == -0.5);
  CHECK(set.terms[1].exponent == -1.0);
  const double l3 = 2.0, l4 = 6.0;
  for (double x : {-2.0, -0.3, 0.0, 1.1, 3.0}) {
    CHECK_THAT(set.terms[0].poly(x), WithinAbs(-(l3 / 6.0) * (x * x - 1.0), 1e-14));
    const double p2 = -x * ((l4 / 24.0) * (x * x - 3.0) + (l3 * l3 / 72.0) * (std::pow(x, 4) - 10.0 * x * x + 15.0));
    CHECK_THAT(set.terms[1].poly(x), WithinAbs(p2, 1e-13));
  }
  CHECK(edgeworth_polynomials(c, 3).terms.size() == 1);
  CHECK(code_of([&] { edgeworth_polynomials(c, 5); }) == ErrorCode::UnsupportedOrder);
  CHECK(code_of([] { edgeworth_polynomials(CumulantSet({1.0}), 4); }) == ErrorCode::UnsupportedOrder);
}

TEST_CASE("gaussian cumulants reduce to Phi", "[edgeworth]") {
  for (double x : {-3.0, 0.0, 0.7}) {
    CHECK(sample_mean_edgeworth_cdf(CumulantSet::gaussian(4), 10, 4, x) == normal_cdf(x));
  }
}

TEST_CASE("edgeworth error order for the mean of exponentials", "[edgeworth][order]") {
  const auto d = DistributionSpec(Exponential{1.0});
  const auto c = standardized_moments(d, 4);
  const std::vector<double> ks{32, 64, 128, 256, 512, 1024};
  for (int q : {3, 4}) {
    std::vector<double> errs;
    for (double k : ks) {
      double worst = 0.0;
      for (double x = -6.0; x <= 6.0; x += 0.01) {
        const auto kk = static_cast<long>(k);
        worst = std::max(worst, std::abs(sample_mean_edgeworth_cdf(c, kk, q, x) - exact_standardized_mean_cdf(d, kk, x)));
      }
      errs.push_back(worst);
    }
    INFO("q = " << q);
    CHECK_THAT(log_log_slope(ks, errs), WithinAbs(-(q - 1) / 2.0, 0.1));
  }
}
