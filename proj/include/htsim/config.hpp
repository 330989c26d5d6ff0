#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "htsim/simulator.hpp"

namespace htsim {

// Flat key = value scenario file. Unset keys take the scenario-table
// defaults; bandwidth, power and colour count default per mode. Unknown keys
// are rejected.
ScenarioConfig parse_config(std::istream& is);
ScenarioConfig parse_config_file(const std::string& path);

// Canonical emission: every key explicit, fixed order, full precision.
// Re-parsing the emitted text reproduces the config exactly.
std::string emit_config(const ScenarioConfig& config);

// FNV-1a of the canonical text, so semantically identical configs share a
// digest regardless of key order or formatting in the source file.
std::string config_digest(const ScenarioConfig& config);

struct RunManifest {
    std::string artifact_version;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string created_utc;
    std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& manifest);

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace htsim
