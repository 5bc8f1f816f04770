#ifndef INEXT_CONFIG_IO_HPP
#define INEXT_CONFIG_IO_HPP

#include "inext/dynamics.hpp"
#include "inext/flutter.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace inext {

inline constexpr int kConfigSchemaVersion = 1;

/// Parses a config document. Comments (// and /* */) are allowed; unknown
/// keys are rejected so typos do not silently fall back to defaults.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const SimConfig& cfg);
SimConfig config_from_json(const nlohmann::json& j);
std::string serialize_config(const SimConfig& cfg);

/// Flutter parameters taken from the physical and numerical sections.
FlutterParams flutter_params(const SimConfig& cfg);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace inext

#endif  // INEXT_CONFIG_IO_HPP
