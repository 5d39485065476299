#pragma once

// Flat `key = value` scenario files. Lists are comma separated, `#` starts a
// comment, and `chi = k:re:im` may repeat (an empty `chi =` clears the list).
// Wave and momentum indices are integers in units of 2 pi / L, written `nz`
// in one dimension or `nx,ny,nz`; modes are written `index:two_s`.

#include <string>
#include <utility>
#include <vector>

#include "diracsea/experiments.hpp"

namespace diracsea {

struct RunConfig {
  ScenarioConfig scenario;
  std::string out_dir = ".";
  int verbosity = 0;
};

/// Parses and validates. Throws ConfigError naming the key at fault; unknown
/// keys are rejected.
ScenarioConfig parse_config_text(const std::string& text);
/// Throws ConfigError with key "config" when the file cannot be read.
ScenarioConfig parse_config_file(const std::string& path);

/// Canonical key = value text with every key present.
std::string serialize_config(const ScenarioConfig& config);
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& config);

Backend parse_backend(const std::string& text);
std::string backend_name(Backend backend);
std::vector<int> parse_int_list(const std::string& key, const std::string& text);

}  // namespace diracsea
