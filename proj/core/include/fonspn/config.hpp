// SPDX-License-Identifier: Apache-2.0
//
// Flat TOML-style configuration files: [section] headers over key = value
// lines, mirroring ExperimentConfig. See README for the key reference.

#pragma once

#include <map>
#include <string>

#include "fonspn/experiment.hpp"

namespace fonspn {

// Parsed but untyped view: "section.key" -> raw value text.
using ConfigMap = std::map<std::string, std::string>;

// Throws ConfigError on malformed lines.
ConfigMap parse_config_text(const std::string& text);

// Reads and parses a config file; unknown keys are rejected. Values are
// validated only when converted, so callers can still override entries
// before building the final ExperimentConfig.
ExperimentConfig load_config_file(const std::string& path);

// Builds the typed configuration from a key map. Unknown keys, bad types,
// and out-of-domain values all raise ConfigError.
ExperimentConfig config_from_map(const ConfigMap& map);

}  // namespace fonspn
