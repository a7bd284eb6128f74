#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscatter/hermite.hpp"
#include "oscatter/multi_index.hpp"

namespace oscatter {

// Physical constants for the physical-unit input mode (eV / nm / fs / keV-c2).
inline constexpr double hbar_c_eV_nm = 197.3269804;
inline constexpr double hbar_eV_fs = 0.6582119569;

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conversion factors from internal natural units back to the input units.
// Internal convention: hbar = 1, and for a standalone model Omega = M = 1
// with lengths in ell = 1/sqrt(M*Omega).
struct UnitScales {
    bool physical = false;  // false: inputs were already natural
    double length = 1.0;    // nm per internal length unit
    double energy = 1.0;    // eV per internal energy unit
    double time = 1.0;      // fs per internal time unit
    double mass = 1.0;      // keV/c^2 per internal mass unit
};

struct IncidentWave {
    enum class Kind { plane_wave, gaussian_packet };
    Kind kind = Kind::plane_wave;
    std::array<double, 3> wavevector{0, 0, 0};  // on-grid components
    std::array<double, 3> center{0, 0, 0};      // gaussian only
    double width = 0.0;                         // gaussian only
    bool normalize = true;
    // Kinematic wavenumber used for channel energetics and far-field q
    // scaling. Defaults to |wavevector|; set explicitly when the grid models
    // a transverse plane and the carrier runs along the off-grid axis.
    std::optional<double> total_wavenumber;

    double grid_wavenumber(int dim) const {
        double s = 0;
        for (int j = 0; j < dim; ++j) s += wavevector[j] * wavevector[j];
        return std::sqrt(s);
    }
    double kinematic_wavenumber(int dim) const {
        return total_wavenumber ? *total_wavenumber : grid_wavenumber(dim);
    }
};

// Raw inputs as they appear in a configuration file, before validation and
// unit scaling. natural_units=false means eV / nm / fs / (keV/c^2).
struct RawModelParameters {
    bool natural_units = true;
    int dimension = 1;
    double particle_mass = 1.0;    // natural: m/M ; physical: keV/c^2
    double oscillator_mass = 1.0;  // natural: 1   ; physical: keV/c^2
    double frequency = 1.0;        // natural: Omega ; physical: hbar*Omega in eV
    std::vector<std::array<double, 3>> sites;  // natural: in ell ; physical: nm
    double coupling = 1.0;         // natural: hbar*Omega*ell^d ; physical: eV*nm^d
    double potential_range = 0.1;  // natural: ell ; physical: nm
    int level_cap = 8;
    IncidentWave incident;         // wavevector in 1/ell resp. 1/nm
    std::optional<double> time_window;  // 1/Omega resp. fs
};

struct ModelConfig {
    int dimension = 1;
    double particle_mass = 1.0;    // internal: ratio to the reference M
    double oscillator_mass = 1.0;  // 1 for a standalone model
    double frequency = 1.0;        // 1 for a standalone model
    std::vector<std::array<double, 3>> sites;  // internal lengths
    double coupling = 1.0;
    double potential_range = 0.1;
    int level_cap = 8;
    IncidentWave incident;
    std::optional<double> time_window;
    UnitScales scales;

    double ell() const { return 1.0 / std::sqrt(oscillator_mass * frequency); }
    OscillatorBasis basis() const {
        return OscillatorBasis(dimension, oscillator_mass, frequency, level_cap);
    }
    std::size_t site_count() const { return sites.size(); }
};

// Validates and rescales raw parameters into internal natural units; the
// returned scales restore the input units at the output boundary.
ModelConfig build_model(const RawModelParameters& raw);

// Re-express a config in its original input units (round-trip partner of
// build_model; exact up to floating-point rounding).
RawModelParameters to_input_units(const ModelConfig& model);

}  // namespace oscatter
