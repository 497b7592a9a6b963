// SPDX-License-Identifier: Apache-2.0
//
// Scenario files are YAML (JSON is accepted as-is). Both are parsed into the
// same JSON tree; that tree's sorted-key minified dump is the canonical form
// that gets hashed into every report.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace rislab {

/// Parse or validation failure; key() names the offending entry
/// ("optimizer.frames_per_eval"), empty for whole-file problems.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key))
  {
  }
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

/// YAML text to JSON. Plain scalars become integers, floats or booleans when
/// they parse as such; quoted scalars stay strings.
nlohmann::json parse_config_text(const std::string& text, const std::string& source = "<string>");

/// Reads a .json or .yaml/.yml file.
nlohmann::json load_config_file(const std::filesystem::path& path);

std::string canonical_form(const nlohmann::json& j);
std::string sha256_hex(const std::string& bytes);

/// Write to a temporary sibling and rename over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace rislab
