#pragma once

#include <cstdint>
#include <optional>

#include "oscatter/far_field.hpp"
#include "oscatter/histogram.hpp"
#include "oscatter/jumps.hpp"
#include "oscatter/model.hpp"

namespace oscatter {

struct ExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two-stage run: coherent elastic diffraction off array 1, far-field
// propagation, one sampled quantum jump per shot at array 2.
struct ExperimentSpec {
    ModelConfig diffractor;            // array 1, reference unit frame
    ModelConfig detector;              // array 2, same unit frame; sites = pixel centers
    DetectorPlane plane;
    double grid_spacing = 0.25;        // stage-1 sampling, units of diffractor ell
    double grid_margin = 8.0;          // in ell
    std::uint64_t shots = 1;
    std::uint64_t seed = 0;
    std::optional<double> inelastic_fraction;  // default: closed-form branching
    int workers = 1;
    std::uint64_t config_hash = 0;
};

struct ExperimentResult {
    Histogram histogram;
    std::vector<double> pixel_intensity;  // |far-field amplitude|^2 per pixel
    ProbabilityTable table;
    double k_out = 0;
    double inelastic_fraction = 0;
};

// Per-site detection response for locally plane-wave illumination with
// outgoing wavenumber k_eff: weight(p, n) = |A_p|^2 |F_n(k_eff)|^2 along the
// propagation axis, closed channels zero. The site-to-site ratio is |A_p|^2,
// so accumulated jumps reproduce the far-field pattern.
JumpWeightTable detector_response_table(const std::vector<cdouble>& amplitudes,
                                        const ModelConfig& detector, double k_eff);

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace oscatter
