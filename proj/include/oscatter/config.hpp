#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oscatter/experiment.hpp"
#include "oscatter/model.hpp"

namespace oscatter {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parsed and validated configuration. Sections:
//   [model] [incident] [grid] [plane] [detector] [run] [oracle]
// Strict: unknown sections or keys are errors with line numbers.
struct ParsedConfig {
    RawModelParameters model_raw;   // includes [incident]
    double grid_spacing = 0.25;     // units of the model ell
    double grid_margin = 8.0;

    bool has_plane = false;
    double plane_distance = 0;
    int plane_pixel_count = 0;
    double plane_pixel_spacing = 0;
    double plane_pixel_width = 0;
    double plane_center = 0;

    bool has_detector = false;
    RawModelParameters detector_raw;  // sites implied by the plane

    std::uint64_t shots = 1;
    std::uint64_t seed = 0;
    std::optional<double> inelastic_fraction;
    int workers = 1;

    // oracle controls
    double oracle_x_min = -70, oracle_x_max = 70;
    int oracle_points = 256;
    double oracle_time_step = 5e-4;
    double oracle_total_time = 30;
    int oracle_level_cap = 4;
    int oracle_time_points = 400;
    bool oracle_absorber = false;
    double oracle_absorber_width = 10;
};

ParsedConfig parse_config(const std::string& text);

// Canonical text form; parse(serialize(c)) == c and its hash is the config
// hash recorded in manifests.
std::string serialize_config(const ParsedConfig& c);
std::uint64_t config_hash(const ParsedConfig& c);

// Built-in presets, expressed as ordinary config text.
std::vector<std::string> preset_names();
std::string preset_config(const std::string& name);

// Builders used by the subcommands.
ModelConfig build_primary_model(const ParsedConfig& c);
// Detector model expressed in the primary model's internal frame, with sites
// placed at the plane's pixel centers.
ModelConfig build_detector_model(const ParsedConfig& c, const ModelConfig& primary);
DetectorPlane build_plane(const ParsedConfig& c, const ModelConfig& primary);
ExperimentSpec build_experiment(const ParsedConfig& c);

}  // namespace oscatter
