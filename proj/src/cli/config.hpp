#pragma once

// Option registration that remembers every experiment key, so the resolved
// configuration can be written back in the format --config reads.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace bwedge::cli {

std::string toml_value(const std::string& v);
std::string toml_value(double v);
std::string toml_value(long v);
std::string toml_value(int v);
std::string toml_value(bool v);
std::string toml_value(std::uint64_t v);
std::string toml_value(const std::vector<long>& v);
std::string toml_value(const std::vector<double>& v);

class Section {
 public:
  explicit Section(CLI::App* sub) : sub_(sub) {}

  /// Experiment parameter: registered as --name and echoed in the config block.
  template <class T>
  CLI::Option* add(const std::string& name, T& ref, const std::string& help) {
    auto* opt = sub_->add_option("--" + name, ref, help)->capture_default_str();
    if constexpr (std::is_same_v<T, std::vector<long>> || std::is_same_v<T, std::vector<double>>) {
      opt->delimiter(',');
    }
    emit_.push_back([name, &ref] { return name + " = " + toml_value(ref) + "\n"; });
    return opt;
  }
  CLI::Option* flag(const std::string& name, bool& ref, const std::string& help);

  /// "[name]" followed by one "key = value" line per parameter.
  std::string config_text() const;
  CLI::App* app() const noexcept { return sub_; }

 private:
  CLI::App* sub_;
  std::vector<std::function<std::string()>> emit_;
};

}  // namespace bwedge::cli
