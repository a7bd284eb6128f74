#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oscatter {

inline constexpr const char* tool_version = "0.1.0";

// Run provenance record. The data outputs are fully determined by
// (config hash, seed, version); the wall times are the only volatile fields.
struct RunManifest {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string version = tool_version;
    std::string subcommand;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> outputs;

    std::string json() const;
};

std::string utc_now();

}  // namespace oscatter
