#include <cmath>
#include <numbers>
#include <vector>

#include "bwedge/cramer.hpp"
#include "catch_amalgamated.hpp"
#include "test_support.hpp"

using namespace bwedge;
using bwedge::testing::code_of;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
Atom exact(const char* text) { return Atom::of(*ExactReal::parse(text)); }
}  // namespace

TEST_CASE("exact reals parse and print", "[exact]") {
  CHECK(ExactReal::parse("3")->value() == 3.0);
  CHECK(ExactReal::parse("-2/5")->value() == -0.4);
  CHECK(ExactReal::parse("0.25")->value() == 0.25);
  CHECK_THAT(ExactReal::parse("3/2*pi")->value(), WithinRel(1.5 * std::numbers::pi, 1e-15));
  CHECK_THAT(ExactReal::parse("-e")->value(), WithinRel(-std::numbers::e, 1e-15));
  CHECK(ExactReal::parse("sqrt2").has_value());
  CHECK(ExactReal::parse("ln2").has_value());
  CHECK_FALSE(ExactReal::parse("0.3x").has_value());
  CHECK_FALSE(ExactReal::parse("1/0").has_value());
  CHECK(ExactReal::parse("3/2*pi")->to_string() == "3/2*pi");
  const auto d = *ExactReal::parse("pi") - *ExactReal::parse("e");
  CHECK(d.to_string() == "-e + pi");
  CHECK((*ExactReal::parse("pi") * ExactReal::Rational(2)).ratio_to(*ExactReal::parse("pi")) == ExactReal::Rational(2));
  CHECK_FALSE(ExactReal::parse("pi")->ratio_to(*ExactReal::parse("e")).has_value());
  CHECK_FALSE(Atom::parse("0.1234567890123456789").exact.has_value());
}

TEST_CASE("one-dimensional verdicts", "[lattice]") {
  const std::vector<double> half{0.5, 0.5};
  const std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};

  const auto bern = lattice_check_1d(std::vector<Atom>{exact("0"), exact("1")}, half);
  CHECK(bern.verdict == Verdict::Lattice);
  CHECK(bern.span == 1.0);
  CHECK(bern.offset == 0.0);

  const auto irr = lattice_check_1d(std::vector<Atom>{exact("e"), exact("3"), exact("pi")}, third);
  CHECK(irr.verdict == Verdict::NonLattice);

  const auto pis = lattice_check_1d(std::vector<Atom>{exact("1/2*pi"), exact("pi"), exact("7/4*pi")}, third);
  CHECK(pis.verdict == Verdict::Lattice);
  CHECK_THAT(pis.span, WithinRel(std::numbers::pi / 4, 1e-15));

  const auto single = lattice_check_1d(std::vector<Atom>{exact("2")}, std::vector<double>{1.0});
  CHECK(single.verdict == Verdict::Lattice);
  CHECK(single.span == 0.0);

  // zero-mass atoms do not count
  const auto masked = lattice_check_1d(std::vector<Atom>{exact("0"), exact("1"), exact("e")}, std::vector<double>{0.5, 0.5, 0.0});
  CHECK(masked.verdict == Verdict::Lattice);
}

TEST_CASE("floating atoms get resolution-qualified answers", "[lattice]") {
  const auto f = lattice_check_1d(std::vector<Atom>{Atom::approx(0.0), Atom::approx(0.75), Atom::approx(2.25)},
                                  std::vector<double>{0.2, 0.3, 0.5});
  CHECK(f.verdict == Verdict::Lattice);
  CHECK_THAT(f.span, WithinRel(0.75, 1e-14));
  const auto g = lattice_check_1d(
      std::vector<Atom>{Atom::approx(std::numbers::e), Atom::approx(3.0), Atom::approx(std::numbers::pi)},
      std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(g.verdict == Verdict::Unresolved);
  // decimal inputs with representation error still resolve
  const auto h = lattice_check_1d(std::vector<Atom>{Atom::approx(0.1), Atom::approx(0.3), Atom::approx(0.7)},
                                  std::vector<double>{0.2, 0.3, 0.5});
  CHECK(h.verdict == Verdict::Lattice);
  CHECK_THAT(h.span, WithinRel(0.2, 1e-12));
  const auto s2 = lattice_check_1d(std::vector<Atom>{Atom::approx(0.0), Atom::approx(1.0), Atom::approx(std::sqrt(2.0))},
                                   std::vector<double>{0.2, 0.3, 0.5});
  CHECK(s2.verdict == Verdict::Unresolved);
}

TEST_CASE("support validation", "[lattice]") {
  CHECK(code_of([] { lattice_check_1d(std::vector<Atom>{}, std::vector<double>{}); }) == ErrorCode::EmptySupport);
  CHECK(code_of([] { lattice_check_1d(std::vector<Atom>{exact("1")}, std::vector<double>{0.0}); }) ==
        ErrorCode::IllegalParameter);
  CHECK(code_of([] { lattice_check_1d(std::vector<Atom>{exact("1"), exact("2")}, std::vector<double>{0.5}); }) ==
        ErrorCode::IllegalParameter);
}

TEST_CASE("semi-lattice search on the reference supports", "[semilattice]") {
  const SupportSpec cube{AtomsND{{{exact("0"), exact("0")}, {exact("0"), exact("1")}, {exact("1"), exact("0")},
                                  {exact("1"), exact("1")}},
                                 {0.25, 0.25, 0.25, 0.25}}};
  const auto vc = semilattice_search(cube);
  CHECK(vc.verdict == Verdict::SemiLattice);
  CHECK(vc.direction == std::vector<double>{1.0, 0.0});
  CHECK(vc.span == 1.0);

  const SupportSpec line{LinearImage{{1.0, 4.0}, DistributionSpec(Normal{0.0, 1.0})}};
  const auto vl = semilattice_search(line);
  CHECK(vl.verdict == Verdict::SemiLattice);
  CHECK(vl.direction == std::vector<double>{-4.0, 1.0});
  CHECK(vl.span == 0.0);

  const SupportSpec gated{BernoulliGated{DistributionSpec(Exponential{1.0}), 0.5}};
  const auto vg = semilattice_search(gated);
  CHECK(vg.verdict == Verdict::SemiLattice);
  CHECK(vg.direction == std::vector<double>{0.0, 1.0});
  CHECK(vg.span == 1.0);

  // a plane of irrational points: no integer direction works
  const SupportSpec spread{AtomsND{{{exact("0"), exact("0")}, {exact("e"), exact("0")}, {exact("pi"), exact("0")},
                                    {exact("0"), exact("sqrt2")}, {exact("0"), exact("ln2")}, {exact("e"), exact("ln2")}},
                                   std::vector<double>(6, 1.0 / 6)}};
  CHECK(semilattice_search(spread, LatticeOptions{1000000, 4}).verdict == Verdict::Unresolved);
}

TEST_CASE("characteristic function moduli", "[cf]") {
  const Law bern = SupportSpec{Atoms1D{{exact("0"), exact("1")}, {0.7, 0.3}}};
  const double t0 = 1.0;
  const double expected = std::abs(std::complex<double>(0.7 + 0.3 * std::cos(t0), 0.3 * std::sin(t0)));
  CHECK_THAT(char_fn_modulus(bern, std::vector<double>{t0}), WithinRel(expected, 1e-15));
  CHECK_THAT(char_fn_modulus(bern, std::vector<double>{2.0 * std::numbers::pi}), WithinAbs(1.0, 1e-15));
  const Law expo = DistributionSpec(Exponential{1.0});
  CHECK_THAT(char_fn_modulus(expo, std::vector<double>{1.0}), WithinRel(1.0 / std::sqrt(2.0), 1e-15));
  const Law gated = SupportSpec{BernoulliGated{DistributionSpec(Exponential{1.0}), 0.5}};
  CHECK_THAT(char_fn_modulus(gated, std::vector<double>{0.0, 2.0 * std::numbers::pi}), WithinAbs(1.0, 1e-15));
  const Law logn = DistributionSpec(LogNormal{0.0, 1.0});
  CHECK(code_of([&] { char_fn_modulus(logn, std::vector<double>{1.0}); }) == ErrorCode::UnsupportedFamily);
}

TEST_CASE("scans confirm periods and certify unit modulus", "[scan]") {
  const Law bern = SupportSpec{Atoms1D{{exact("0"), exact("1")}, {0.7, 0.3}}};
  const auto s = cramer_scan(bern, std::vector<double>{1.0}, 10.0 * std::numbers::pi);
  REQUIRE(s.span);
  CHECK(*s.span == 1.0);
  REQUIRE(s.detected_period);
  CHECK_THAT(*s.detected_period, WithinRel(2.0 * std::numbers::pi, 1e-15));
  CHECK(s.period_deviation <= 1e-10);
  CHECK(s.semilattice_certified);

  const Law expo = DistributionSpec(Exponential{1.0});
  const auto e = cramer_scan(expo, std::vector<double>{1.0}, 100.0);
  CHECK_FALSE(e.span);
  CHECK_FALSE(e.semilattice_certified);
  CHECK(e.max_tail_modulus < 0.03);

  // an explicitly wrong span is rejected
  const auto wrong = cramer_scan(bern, std::vector<double>{1.0}, 50.0, 0.01, 0.7);
  CHECK_FALSE(wrong.detected_period);

  CHECK(code_of([&] { cramer_scan(bern, std::vector<double>{0.0}, 10.0); }) == ErrorCode::IllegalParameter);
  CHECK(code_of([&] { cramer_scan(bern, std::vector<double>{1.0}, -1.0); }) == ErrorCode::IllegalParameter);
}
