#include <cmath>

#include "bwedge/edgeworth.hpp"
#include "bwedge/special.hpp"
#include "catch_amalgamated.hpp"
#include "reference_tables.hpp"

using namespace bwedge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normal cdf matches the high-precision table", "[normal]") {
  for (const auto& pt : reference::kNormalCdf) {
    INFO("x = " << pt.x);
    CHECK_THAT(normal_cdf(pt.x), WithinAbs(pt.cdf, 1e-14));
    // tails keep relative accuracy too
    CHECK_THAT(normal_cdf(pt.x), WithinRel(pt.cdf, 1e-13));
  }
}

TEST_CASE("normal pdf", "[normal]") {
  CHECK_THAT(normal_pdf(0.0), WithinRel(0.3989422804014327, 1e-15));
  CHECK_THAT(normal_pdf(2.0), WithinRel(0.05399096651318806, 1e-14));
  CHECK(normal_pdf(-1.3) == normal_pdf(1.3));
}

TEST_CASE("incomplete gamma against the reference table", "[gamma]") {
  for (const auto& pt : reference::kGamma) {
    INFO("a = " << pt.a << ", x = " << pt.x);
    CHECK_THAT(special::gamma_p(pt.a, pt.x), WithinRel(pt.p, 1e-12));
    CHECK_THAT(special::gamma_q(pt.a, pt.x), WithinRel(pt.q, 1e-12));
  }
}

TEST_CASE("incomplete gamma edge values", "[gamma]") {
  CHECK(special::gamma_p(3.0, 0.0) == 0.0);
  CHECK(special::gamma_q(3.0, 0.0) == 1.0);
  // a = 1 is the exponential CDF
  for (double x : {0.1, 1.0, 7.5}) CHECK_THAT(special::gamma_p(1.0, x), WithinRel(-std::expm1(-x), 1e-14));
}

TEST_CASE("stirlerr is continuous across its branch point", "[stirlerr]") {
  const double below = special::stirlerr(15.0);
  const double above = special::stirlerr(15.0 + 1e-9);
  CHECK_THAT(below, WithinRel(above, 1e-8));
  CHECK_THAT(special::stirlerr(1.0), WithinRel(std::lgamma(2.0) - (1.5 * std::log(1.0) - 1.0 + 0.5 * std::log(2 * M_PI)), 1e-13));
}

TEST_CASE("bd0 vanishes at x = m and is positive elsewhere", "[bd0]") {
  CHECK(special::bd0(10.0, 10.0) == 0.0);
  CHECK(special::bd0(9.0, 10.0) > 0.0);
  CHECK_THAT(special::bd0(5.0, 10.0), WithinRel(5.0 * std::log(0.5) + 5.0, 1e-14));
}
