#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "oscatter/math_util.hpp"
#include "oscatter/model.hpp"
#include "oscatter/multi_index.hpp"

namespace oscatter {

struct KinematicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite-time energy-conservation weight sin(eps*T/2hbar)/(pi*eps); the
// Dirichlet kernel that tends to delta(eps) as T grows. hbar = 1 internally.
inline double energy_window(double eps, double T) {
    if (T <= 0) throw KinematicsError("energy_window: time window must be positive");
    if (eps == 0.0) return T / (2.0 * pi);
    return std::sin(0.5 * eps * T) / (pi * eps);
}

// Half width at half maximum of the window in eps, found by bisection on the
// normalized sinc. Scales exactly as 1/T.
double energy_window_half_width(double T);

struct DeltaLimitCheck {
    bool satisfied = false;
    bool degenerate = false;  // exact on-shell elastic mismatch: no finite T suffices
};

// Implements the "much greater than" condition T >> 2m/|2m*omega + (k^2-k'^2)|
// with the documented constant C = 100.
inline constexpr double delta_limit_factor = 100.0;

inline DeltaLimitCheck delta_limit_satisfied(double particle_mass, double omega_n0, double k_in,
                                             double k_out, double T) {
    const double mismatch = 2.0 * particle_mass * omega_n0 + (k_out * k_out - k_in * k_in);
    if (mismatch == 0.0) return {false, true};
    const double threshold = delta_limit_factor * 2.0 * particle_mass / std::abs(mismatch);
    return {T >= threshold, false};
}

// Energy conservation: the particle loses hbar*omega_{n,0} to the oscillator.
// Closed channels (k_in^2 < 2 m omega) yield nullopt.
inline std::optional<double> try_outgoing_wavenumber(double k_in, double particle_mass, double omega_n0) {
    if (k_in <= 0) throw KinematicsError("outgoing_wavenumber: incoming wavenumber must be positive");
    const double k2 = k_in * k_in - 2.0 * particle_mass * omega_n0;
    if (k2 < 0) return std::nullopt;
    return std::sqrt(k2);
}

inline double outgoing_wavenumber(double k_in, double particle_mass, double omega_n0) {
    auto k = try_outgoing_wavenumber(k_in, particle_mass, omega_n0);
    if (!k) throw KinematicsError("channel closed");
    return *k;
}

inline std::optional<double> try_outgoing_wavenumber(const ModelConfig& model, double k_in,
                                                     const MultiIndex& n) {
    return try_outgoing_wavenumber(k_in, model.particle_mass, model.frequency * n.total());
}

}  // namespace oscatter
