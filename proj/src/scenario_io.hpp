#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fieldcbf/sim.hpp"

namespace fieldcbf::io {

using Config = ScenarioConfig<double>;

/// Malformed or invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (unreadable input, unwritable output).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(NoiseMode mode);
std::string to_string(Phi2Formula formula);
std::string to_string(InfeasiblePolicy policy);

/// Parses and validates a scenario document. Unknown keys are rejected.
Config parse_scenario(const nlohmann::json& doc, const std::string& fallback_name);

/// Reads a scenario file; parse/validation problems raise ConfigError, file
/// problems raise IoError.
Config load_scenario(const std::filesystem::path& path);

/// Fully resolved configuration with every field explicit and keys in
/// canonical (alphabetical) order.
nlohmann::json canonical_json(const Config& cfg);

/// FNV-1a 64 over the canonical serialization; stable across platforms.
std::string config_hash(const Config& cfg);

}  // namespace fieldcbf::io
