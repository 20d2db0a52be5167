#include <sstream>
#include <vector>

#include "bwedge/report.hpp"
#include "catch_amalgamated.hpp"
#include "test_support.hpp"

using namespace bwedge;
using bwedge::testing::code_of;

TEST_CASE("numbers round trip", "[report]") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0}) CHECK(std::stod(report::number(v)) == v);
  CHECK(report::number(2.0) == "2");
}

TEST_CASE("sweep tables", "[report]") {
  UniformErrorReport r;
  r.grid = {-1.0, 1.0};
  r.rows = {{50, 1e-3, 0.35, 0.5}, {100, 3e-4, 0.3, 0.5}};
  r.sup_error = 3e-4;
  const report::SweepContext ctx{0.3, 4, "exponential"};
  const auto csv = report::sweep_csv(r, ctx);
  CHECK(csv == "n,p,q,family,supError,scaledError,fittedSlope\n"
               "50,0.3,4,exponential,0.001,0.35,\n"
               "100,0.3,4,exponential,3e-04,0.3,\n");
  r.fitted_slope = -1.5;
  const auto j = report::sweep_json(r, ctx);
  CHECK(j["schema_version"] == report::kSchemaVersion);
  CHECK(j["fittedSlope"] == -1.5);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][1]["n"] == 100);
}

TEST_CASE("verdict json", "[report]") {
  LatticeVerdict v{Verdict::SemiLattice, {1.0, 0.0}, 0.0, 1.0, "found"};
  const auto j = report::verdict_json(v);
  CHECK(j["verdict"] == "SemiLattice");
  CHECK(j["direction"] == std::vector<double>{1.0, 0.0});
  CHECK(j["span"] == 1.0);
}

TEST_CASE("binary samples round trip", "[report]") {
  const std::vector<double> z{0.0, -1.25, 3.141592653589793, 1e-310};
  std::stringstream ss;
  report::write_samples_binary(ss, z);
  CHECK(ss.str().size() == 32);
  CHECK(static_cast<unsigned char>(ss.str()[8 + 7]) == 0xbf);  // little endian sign/exponent byte of -1.25
  CHECK(report::read_samples_binary(ss) == z);
  std::stringstream partial("abc");
  CHECK(code_of([&] { report::read_samples_binary(partial); }) == ErrorCode::IoError);
  std::ostringstream csv;
  report::write_samples_csv(csv, z);
  CHECK(csv.str().rfind("z\n0\n-1.25\n", 0) == 0);
}
