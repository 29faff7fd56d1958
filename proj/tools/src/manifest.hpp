#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ringlens/config.hpp"

namespace ringlens::tools {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written next to every run's outputs as manifest.json.
/// config_hash is the SHA-256 of the canonical serialization of the config
/// as used (after CLI overrides), so the hash is platform independent.
struct RunManifest {
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;
};

void write_manifest(const std::filesystem::path& out_dir, const RunConfig& config,
                    const std::vector<std::string>& outputs, double wall_time_s);

}  // namespace ringlens::tools
