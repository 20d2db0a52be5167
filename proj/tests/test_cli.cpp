#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "bwedge/cli.hpp"
#include "catch_amalgamated.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using bwedge::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"bwedge"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bwedge_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

// The "# --- config ---" block of a CSV artifact, comment markers removed.
std::string embedded_config(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  bool inside = false;
  while (std::getline(is, line)) {
    if (line == "# --- config ---") {
      inside = true;
    } else if (line == "# --- end config ---") {
      break;
    } else if (inside) {
      out += line.substr(2) + "\n";
    }
  }
  return out;
}

}  // namespace

TEST_CASE("help documents exit codes", "[cli]") {
  const auto r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Exit codes") != std::string::npos);
  CHECK(r.out.find("convergence") != std::string::npos);
}

TEST_CASE("bad input maps to configuration errors", "[cli]") {
  CHECK(invoke({}).code == bwedge::cli::kConfigError);
  CHECK(invoke({"expand", "--bogus", "1"}).code == bwedge::cli::kConfigError);
  CHECK(invoke({"expand", "--format", "xml"}).code == bwedge::cli::kConfigError);
  CHECK(invoke({"expand", "--dist", "family=exponential speed=2"}).code == bwedge::cli::kConfigError);
  CHECK(invoke({"expand", "--grid", "1:0:1"}).code == bwedge::cli::kConfigError);

  const auto cfg = scratch("bad.toml");
  std::ofstream(cfg) << "[expand]\nn = 10\nbogus = 3\n";
  CHECK(invoke({"--config", cfg.string(), "expand"}).code == bwedge::cli::kConfigError);
}

TEST_CASE("domain and io errors have their own codes", "[cli]") {
  const auto q5 = invoke({"expand", "--q", "5"});
  CHECK(q5.code == bwedge::cli::kDomainError);
  CHECK(q5.err.find("UnsupportedOrder") != std::string::npos);
  CHECK(invoke({"mixture", "--dist", "family=discrete atoms=0,1 probs=0.5,0.5"}).code == bwedge::cli::kDomainError);
  CHECK(invoke({"expand", "--grid", "0:1:0.5", "--out", "/nonexistent-dir/x.csv"}).code == bwedge::cli::kIoError);
}

TEST_CASE("a failed requested check exits with the invariant code", "[cli]") {
  // at q = 3 the deterministic difference decays like n^{-3/2}, not n^{-1}
  const auto r = invoke({"convergence", "--q", "3", "--sizes", "50,100,200", "--grid", "-4:4:0.05", "--check"});
  CHECK(r.code == bwedge::cli::kInvariantFailure);
  CHECK(r.err.find("invariant failure") != std::string::npos);
  CHECK(r.out.find("fittedSlope") != std::string::npos);
}

TEST_CASE("emitted config reproduces the artifact", "[cli][roundtrip]") {
  const auto cfg = scratch("mc.toml");
  const auto a = scratch("mc_a.csv");
  const auto b = scratch("mc_b.csv");
  REQUIRE(invoke({"--emit-config", cfg.string(), "mc", "--reps", "20000", "--n", "50", "--seed", "5", "--grid",
                  "-3:3:0.1", "--out", a.string()})
              .code == 0);
  REQUIRE(invoke({"--config", cfg.string(), "mc", "--out", b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("seed = 5") != std::string::npos);
}

TEST_CASE("the embedded block alone reproduces the artifact", "[cli][roundtrip]") {
  const auto a = scratch("conv_a.csv");
  const auto b = scratch("conv_b.csv");
  const auto cfg = scratch("conv.toml");
  REQUIRE(invoke({"convergence", "--p", "0.5", "--sizes", "50,100,200", "--grid", "-4:4:0.05", "--out", a.string()})
              .code == 0);
  const auto text = slurp(a);
  std::ofstream(cfg) << embedded_config(text);
  REQUIRE(invoke({"--config", cfg.string(), "convergence", "--out", b.string()}).code == 0);
  CHECK(slurp(b) == text);
  CHECK(text.find("# schema_version=1") != std::string::npos);
}

TEST_CASE("json artifacts carry schema and config", "[cli]") {
  const auto r = invoke({"inverse-moment", "--alpha", "1.5", "--K", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "inverse-moment");
  CHECK(j["config"].get<std::string>().rfind("[inverse-moment]\n", 0) == 0);
  CHECK(j["coefficients"][0] == 1.0);
  CHECK(std::abs(j["residualSlope"].get<double>() + 3.5) < 0.2);
}

TEST_CASE("output directory override", "[cli]") {
  const auto dir = scratch("outdir");
  fs::create_directories(dir);
  ::setenv("BWEDGE_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = invoke({"identities", "--out", "ids.csv"});
  ::unsetenv("BWEDGE_OUTPUT_DIR");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "ids.csv"));
  CHECK(slurp(dir / "ids.csv").find("check,n,p,param,lhs,rhs,relError,holds") != std::string::npos);
}

TEST_CASE("lattice-check on the reference supports", "[cli]") {
  const auto r = invoke({"lattice-check", "--examples", "--r-max", "60"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"bernoulli {0,1}\",Lattice") != std::string::npos);
  CHECK(r.out.find("\"{e,3,pi}\",NonLattice") != std::string::npos);
  CHECK(r.out.find("\"(YT,T)\",SemiLattice") != std::string::npos);
  CHECK(r.err.find("certifies") != std::string::npos);
}

TEST_CASE("samples export", "[cli]") {
  const auto bin = scratch("z.bin");
  REQUIRE(invoke({"mc", "--reps", "1000", "--grid", "-1:1:1", "--samples-out", bin.string()}).code == 0);
  CHECK(fs::file_size(bin) == 8000);
}
