#pragma once

#include <stdexcept>
#include <vector>

#include "oscatter/grid.hpp"
#include "oscatter/model.hpp"

namespace oscatter {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Joint excitation label: one level per site (1D brute force keeps these
// small: a single site up to level_cap, or two sites with a low per-site cap).
struct OracleChannel {
    std::vector<int> site_levels;
    int total() const {
        int t = 0;
        for (int n : site_levels) t += n;
        return t;
    }
};

// Particle wavefunction per oscillator channel on a 1D grid.
struct CoupledState {
    Grid grid;
    std::vector<OracleChannel> channels;
    std::vector<std::vector<cdouble>> amps;  // [channel][grid point]
    double time = 0;
    double absorbed = 0;  // norm removed by the boundary mask

    double norm_squared() const;
    // P(channel) = per-channel norm; sums to 1 (minus absorbed mass)
    std::vector<double> channel_probabilities() const;
};

struct EvolveOptions {
    double time_step = 0;
    double total_time = 0;
    int per_site_level_cap = 4;
    bool absorber = false;
    double absorber_width = 0;     // length units; sin^2 rate ramp at both ends
    double absorber_strength = 6;  // peak absorption rate (1/time)
    int norm_check_interval = 64;
};

struct EvolveDiagnostics {
    int steps = 0;
    double norm_drift = 0;           // max |norm + absorbed - 1| seen
    double boundary_monitor = 0;     // max edge density fraction (reflected flux proxy)
    double leakage = 0;              // max population in any top-cap channel
    double absorbed = 0;
};

// Product initial state: every oscillator in its ground channel, the particle
// in the configured packet. The incident wave must be a gaussian packet.
CoupledState initial_state(const ModelConfig& model, const Grid& grid, int per_site_level_cap);

// Strang-split norm-preserving propagation of the coupled system; kinetic and
// channel-energy phases applied in k space, the Gaussian-potential coupling
// matrix exponentiated exactly per grid point via its eigensystem.
// Unitarity is enforced to 1e-8 and channel leakage into the cap to 1e-6.
EvolveDiagnostics evolve(CoupledState& state, const ModelConfig& model, const EvolveOptions& opt);

// Independent first-order route: time-ordered perturbation integral evaluated
// by Simpson quadrature over the interaction time with free propagation on
// either side. Single-site, per-level probabilities for levels 1..cap.
std::vector<double> first_order_prediction(const ModelConfig& model, const Grid& grid, double total_time,
                                           int time_points, int level_cap);

}  // namespace oscatter
