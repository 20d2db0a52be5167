#pragma once

// Text and JSON encodings of the artifacts other tools consume. Every table
// carries schema_version; CSV numbers use shortest round-trip formatting.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bwedge/bwm.hpp"
#include "bwedge/cramer.hpp"
#include "json.hpp"

namespace bwedge::report {

inline constexpr int kSchemaVersion = 1;

/// Shortest representation that parses back to the same double.
std::string number(double v);

struct SweepContext {
  double p = 0.0;
  int q = 0;
  std::string family;
};

/// Columns n,p,q,family,supError,scaledError,fittedSlope (slope repeated per row).
std::string sweep_csv(const UniformErrorReport& r, const SweepContext& ctx);
nlohmann::json sweep_json(const UniformErrorReport& r, const SweepContext& ctx);

nlohmann::json verdict_json(const LatticeVerdict& v);
nlohmann::json scan_json(const ScanReport& s);

/// One "z" column.
void write_samples_csv(std::ostream& os, std::span<const double> samples);
/// Raw little-endian IEEE-754 float64 values, no header.
void write_samples_binary(std::ostream& os, std::span<const double> samples);
std::vector<double> read_samples_binary(std::istream& is);

}  // namespace bwedge::report
