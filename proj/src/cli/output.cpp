#include "output.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bwedge/error.hpp"
#include "bwedge/report.hpp"

namespace bwedge::cli {

std::string csv_document(const Provenance& prov, const std::string& table) {
  std::ostringstream os;
  os << "# bwedge " << prov.command << "\n";
  os << "# schema_version=" << report::kSchemaVersion << "\n";
  for (const auto& [k, v] : prov.meta) os << "# " << k << "=" << v << "\n";
  os << "# --- config ---\n";
  std::istringstream lines(prov.config);
  for (std::string line; std::getline(lines, line);) os << "# " << line << "\n";
  os << "# --- end config ---\n";
  os << table;
  return os.str();
}

std::string json_document(const Provenance& prov, nlohmann::json body) {
  nlohmann::json doc;
  doc["schema_version"] = report::kSchemaVersion;
  doc["command"] = prov.command;
  doc["config"] = prov.config;
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : prov.meta) meta[k] = v;
  doc["meta"] = meta;
  for (auto& [k, v] : body.items()) {
    if (k != "schema_version") doc[k] = v;
  }
  return doc.dump(2) + "\n";
}

std::string resolve_path(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  const char* dir = std::getenv(kOutputDirEnv);
  if (dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
  return p.string();
}

void write_text(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  const std::string target = resolve_path(path);
  std::ofstream f(target, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::IoError, "cannot open " + target + " for writing");
  f << content;
  f.close();
  if (!f) fail(ErrorCode::IoError, "failed writing " + target);
}

}  // namespace bwedge::cli
