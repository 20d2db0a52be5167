#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace bwedge::cli {

inline constexpr const char* kOutputDirEnv = "BWEDGE_OUTPUT_DIR";

/// Header material shared by every artifact of one invocation.
struct Provenance {
  std::string command;
  std::string config;  ///< resolved "[section]" text, re-ingestible with --config
  std::vector<std::pair<std::string, std::string>> meta;
};

/// "# key=value" header, the config block between markers, then the table.
std::string csv_document(const Provenance& prov, const std::string& table);

/// body plus schema_version, command, config and meta.
std::string json_document(const Provenance& prov, nlohmann::json body);

/// Relative paths are placed under $BWEDGE_OUTPUT_DIR when it is set.
std::string resolve_path(const std::string& path);

/// Writes content to path, or to `fallback` when path is empty. IoError on failure.
void write_text(const std::string& path, const std::string& content, std::ostream& fallback);

}  // namespace bwedge::cli
