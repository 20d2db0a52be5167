#include "bwedge/report.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>

#include "bwedge/error.hpp"

namespace bwedge::report {

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string sweep_csv(const UniformErrorReport& r, const SweepContext& ctx) {
  std::string out = "n,p,q,family,supError,scaledError,fittedSlope\n";
  const std::string slope = r.fitted_slope ? number(*r.fitted_slope) : "";
  for (const auto& row : r.rows) {
    out += std::to_string(row.n) + "," + number(ctx.p) + "," + std::to_string(ctx.q) + "," + ctx.family + "," +
           number(row.sup_error) + "," + number(row.scaled_error) + "," + slope + "\n";
  }
  return out;
}

nlohmann::json sweep_json(const UniformErrorReport& r, const SweepContext& ctx) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"supError", row.sup_error}, {"scaledError", row.scaled_error}, {"argmax", row.argmax}});
  }
  nlohmann::json out{{"schema_version", kSchemaVersion},
                     {"p", ctx.p},
                     {"q", ctx.q},
                     {"family", ctx.family},
                     {"gridSize", r.grid.size()},
                     {"supError", r.sup_error},
                     {"argmax", r.argmax},
                     {"rows", rows}};
  out["fittedSlope"] = r.fitted_slope ? nlohmann::json(*r.fitted_slope) : nlohmann::json(nullptr);
  if (!r.grid.empty()) out["grid"] = {{"lo", r.grid.front()}, {"hi", r.grid.back()}};
  return out;
}

nlohmann::json verdict_json(const LatticeVerdict& v) {
  return {{"schema_version", kSchemaVersion},
          {"verdict", std::string(to_string(v.verdict))},
          {"direction", v.direction},
          {"offset", v.offset},
          {"span", v.span},
          {"evidence", v.evidence}};
}

nlohmann::json scan_json(const ScanReport& s) {
  nlohmann::json out{{"maxTailModulus", s.max_tail_modulus},
                     {"argmaxR", s.argmax_r},
                     {"samples", s.samples},
                     {"periodDeviation", s.period_deviation},
                     {"semilatticeCertified", s.semilattice_certified},
                     {"evidence", s.evidence}};
  out["span"] = s.span ? nlohmann::json(*s.span) : nlohmann::json(nullptr);
  out["detectedPeriod"] = s.detected_period ? nlohmann::json(*s.detected_period) : nlohmann::json(nullptr);
  return out;
}

void write_samples_csv(std::ostream& os, std::span<const double> samples) {
  os << "z\n";
  for (double z : samples) os << number(z) << '\n';
}

void write_samples_binary(std::ostream& os, std::span<const double> samples) {
  for (double z : samples) {
    auto bits = std::bit_cast<std::uint64_t>(z);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    os.write(reinterpret_cast<const char*>(bytes), 8);
  }
  if (!os) fail(ErrorCode::IoError, "failed writing binary samples");
}

std::vector<double> read_samples_binary(std::istream& is) {
  std::vector<double> out;
  unsigned char bytes[8];
  while (is.read(reinterpret_cast<char*>(bytes), 8)) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    out.push_back(std::bit_cast<double>(bits));
  }
  if (is.gcount() != 0) fail(ErrorCode::IoError, "binary sample file length is not a multiple of 8");
  return out;
}

}  // namespace bwedge::report
