#include "oscatter/manifest.hpp"

#include <ctime>

#include <json.hpp>

namespace oscatter {

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string RunManifest::json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["version"] = version;
    j["subcommand"] = subcommand;
    j["started_utc"] = started_utc;
    j["finished_utc"] = finished_utc;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

}  // namespace oscatter
