#include "config.hpp"

#include "bwedge/report.hpp"

namespace bwedge::cli {

std::string toml_value(const std::string& v) {
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string toml_value(double v) {
  std::string s = report::number(v);
  // keep integral doubles recognizable as floats
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string toml_value(long v) { return std::to_string(v); }
std::string toml_value(int v) { return std::to_string(v); }
std::string toml_value(bool v) { return v ? "true" : "false"; }
std::string toml_value(std::uint64_t v) { return std::to_string(v); }

namespace {
template <class T>
std::string list_value(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += toml_value(v[i]);
  }
  return out + "]";
}
}  // namespace

std::string toml_value(const std::vector<long>& v) { return list_value(v); }
std::string toml_value(const std::vector<double>& v) { return list_value(v); }

CLI::Option* Section::flag(const std::string& name, bool& ref, const std::string& help) {
  auto* opt = sub_->add_flag("--" + name, ref, help);
  emit_.push_back([name, &ref] { return name + " = " + toml_value(ref) + "\n"; });
  return opt;
}

std::string Section::config_text() const {
  std::string out = "[" + sub_->get_name() + "]\n";
  for (const auto& e : emit_) out += e();
  return out;
}

}  // namespace bwedge::cli
