#pragma once

// Run configuration files.
//
// Grammar, one statement per line:
//   line     := blank | comment | section | pair
//   comment  := '#' anything
//   section  := '[' name ('.' name)* ']'
//   pair     := name '=' value [comment]
//   value    := number | '"' chars '"' | 'true' | 'false' | '[' number (',' number)* ']'
// Keys inside a section are stored as "section.key". Strings accept \" and \\.
//
// Recognised keys:
//   preset                 example1 | example2 | example3 | example4-synthetic
//   grid.h                 number or spacing string ("1/40", "pi/25")
//   model.rho/c/meta       raw model files; replaces the preset (see load_model)
//   time.tau, time.t_end
//   source.kind            "none" | "ricker"
//   source.fp, source.delay, source.amplitude, source.location = [x, y(, z)]
//   pml.formulation        "none" | "direct" | "substituted"
//   pml.width, pml.sigma_max
//   pml.profile            "constant" | "linear" | "quadratic" | "inverse-distance"
//   energy.enabled, energy.min, energy.max
//   output.dir, output.snapshot_every, output.snapshot_times = [...]
//   run.cfl_override
// Relative paths resolve against the config file's directory.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cwave/simulation.hpp"

namespace cwave {

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>>;

struct ConfigEntry {
  ConfigValue value;
  int line{0};
};

class ConfigDoc {
 public:
  static ConfigDoc parse(std::string_view text);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, ConfigEntry>& entries() const { return entries_; }

  double number(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::string string(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  /// Number, or a string accepted by parse_spacing.
  double spacing(const std::string& key) const;

 private:
  const ConfigEntry& at(const std::string& key) const;
  std::map<std::string, ConfigEntry> entries_;
};

/// Builds a run from a parsed document. `base` resolves relative paths.
RunConfig build_run_config(const ConfigDoc& doc, const std::filesystem::path& base = {});

RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace cwave
