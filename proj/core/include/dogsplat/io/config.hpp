#pragma once

#include "dogsplat/trainer.hpp"

#include <string>
#include <vector>

namespace dogsplat {

/// Flat `key = value` text, `#` starts a comment. Unset keys keep their
/// defaults. Throws UnknownKey, TypeError (value does not parse as the
/// key's type), RangeError (TrainConfig::validate) and ParseError (line
/// without '=' or a repeated key).
TrainConfig parse_config(const std::string& text);
TrainConfig load_config(const std::string& path);

/// Every key with its current value, one per line; parse_config() of the
/// result reproduces `config` exactly.
std::string format_config(const TrainConfig& config);

struct ConfigKey {
  std::string name;
  std::string type;
  std::string default_value;
};
std::vector<ConfigKey> config_keys();

}  // namespace dogsplat
