#pragma once

#include <string>

#include "ringlens/config.hpp"

namespace ringlens {

/// Parses the plain-text run configuration format:
///
///   # comment
///   seed = 42
///   [taap]
///   tilt_rad = 0.070
///   [sequence]
///   stage = hold omega=42.4 duration=0.01
///   stage = launch v=0.031 delta_max=0.15
///
/// Sections are [constants], [taap], [solver], [matter], [sequence]; all
/// keys are optional and default to the shipped configuration. Unknown
/// sections or keys are an error (throws ConfigError), as are malformed
/// numbers. The full schema is documented in the README.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

/// Canonical serialization: fixed section/key order, 17 significant
/// digits. parse_config(serialize_config(c)) == c for any valid c, and
/// the byte stream is the input to the run-manifest config hash.
std::string serialize_config(const RunConfig& config);

/// Applies a dot-path override such as "taap.tilt_rad=0.089" or
/// "sequence.stage3.delta=0.1" (stageN addresses the N-th stage).
void apply_override(RunConfig& config, const std::string& key_equals_value);

}  // namespace ringlens
