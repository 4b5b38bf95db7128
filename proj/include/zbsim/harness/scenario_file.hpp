#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "zbsim/scenario/config.hpp"

namespace zbsim {

/// Parses the sectioned `key = value` scenario format documented in
/// README.md. Physical quantities must carry a unit. Throws
/// ScenarioError with the offending line and key; the result is validated.
ScenarioConfig parse_scenario(std::string_view text);

/// Reads and parses a file; unreadable files raise ScenarioError (line 0).
ScenarioConfig load_scenario(const std::string& path);

/// The scenario compiled into the binary (scenarios/default.scenario).
std::string_view default_scenario_text();
ScenarioConfig default_scenario();

struct ScenarioWriteOptions {
  /// Free-form comment lines placed under the file banner.
  std::vector<std::string> header_notes;
};

/// Serializes a scenario so that parse_scenario(write_scenario(c)) == c.
/// Every entry is followed by a comment stating where its value comes from.
std::string write_scenario(const ScenarioConfig& cfg, const ScenarioWriteOptions& options = {});

}  // namespace zbsim
