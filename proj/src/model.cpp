#include "oscatter/model.hpp"

#include <cmath>

namespace oscatter {

namespace {

void validate_raw(const RawModelParameters& raw) {
    if (raw.dimension < 1 || raw.dimension > 3) throw ModelError("dimension must be 1, 2 or 3");
    if (raw.particle_mass <= 0) throw ModelError("non-positive particle mass");
    if (raw.oscillator_mass <= 0) throw ModelError("non-positive oscillator mass");
    if (raw.frequency <= 0) throw ModelError("non-positive frequency");
    if (raw.potential_range <= 0) throw ModelError("non-positive potential range");
    if (raw.level_cap < 1) throw ModelError("level cap must be >= 1");
    if (raw.sites.empty()) throw ModelError("empty site list");
    for (std::size_t i = 0; i < raw.sites.size(); ++i)
        for (std::size_t j = i + 1; j < raw.sites.size(); ++j) {
            double d2 = 0;
            for (int a = 0; a < raw.dimension; ++a) {
                double d = raw.sites[i][a] - raw.sites[j][a];
                d2 += d * d;
            }
            if (d2 == 0.0) throw ModelError("duplicate sites");
        }
    if (raw.incident.kind == IncidentWave::Kind::gaussian_packet && raw.incident.width <= 0)
        throw ModelError("gaussian packet width must be positive");
    if (raw.incident.kinematic_wavenumber(raw.dimension) <= 0)
        throw ModelError("incident wavenumber must be positive");
    if (raw.time_window && *raw.time_window <= 0) throw ModelError("time window must be positive");
}

}  // namespace

ModelConfig build_model(const RawModelParameters& raw) {
    validate_raw(raw);

    ModelConfig m;
    m.dimension = raw.dimension;
    m.level_cap = raw.level_cap;
    m.incident = raw.incident;

    if (raw.natural_units) {
        m.particle_mass = raw.particle_mass / raw.oscillator_mass;
        m.oscillator_mass = 1.0;
        m.frequency = 1.0;
        // inputs in units of the raw (M, Omega); rescale lengths/energies if
        // the caller did not already use Omega = M = 1
        const double ell_in = 1.0 / std::sqrt(raw.oscillator_mass * raw.frequency);
        m.potential_range = raw.potential_range / ell_in;
        m.coupling = raw.coupling / (raw.frequency * std::pow(ell_in, raw.dimension));
        m.sites = raw.sites;
        for (auto& s : m.sites)
            for (int j = 0; j < m.dimension; ++j) s[j] /= ell_in;
        for (int j = 0; j < m.dimension; ++j) {
            m.incident.wavevector[j] *= ell_in;
            m.incident.center[j] /= ell_in;
        }
        m.incident.width = raw.incident.width / ell_in;
        if (raw.incident.total_wavenumber) m.incident.total_wavenumber = *raw.incident.total_wavenumber * ell_in;
        if (raw.time_window) m.time_window = *raw.time_window * raw.frequency;
        m.scales.physical = false;
        m.scales.length = ell_in;
        m.scales.energy = raw.frequency;
        m.scales.time = 1.0 / raw.frequency;
        m.scales.mass = raw.oscillator_mass;
        return m;
    }

    // physical mode: masses in keV/c^2, hbar*Omega in eV, lengths in nm,
    // times in fs. Natural units: hbar = 1, energy unit hbar*Omega,
    // time unit 1/Omega, length unit ell = hbar/sqrt(M * hbar*Omega).
    const double Mc2_eV = raw.oscillator_mass * 1e3;
    const double E0 = raw.frequency;  // hbar*Omega [eV]
    const double ell_nm = hbar_c_eV_nm / std::sqrt(Mc2_eV * E0);
    const double t0_fs = hbar_eV_fs / E0;

    m.particle_mass = raw.particle_mass / raw.oscillator_mass;
    m.oscillator_mass = 1.0;
    m.frequency = 1.0;
    m.potential_range = raw.potential_range / ell_nm;
    m.coupling = raw.coupling / (E0 * std::pow(ell_nm, raw.dimension));
    m.sites = raw.sites;
    for (auto& s : m.sites)
        for (int j = 0; j < m.dimension; ++j) s[j] /= ell_nm;
    for (int j = 0; j < m.dimension; ++j) {
        m.incident.wavevector[j] *= ell_nm;
        m.incident.center[j] /= ell_nm;
    }
    m.incident.width = raw.incident.width / ell_nm;
    if (raw.incident.total_wavenumber) m.incident.total_wavenumber = *raw.incident.total_wavenumber * ell_nm;
    if (raw.time_window) m.time_window = *raw.time_window / t0_fs;

    m.scales.physical = true;
    m.scales.length = ell_nm;
    m.scales.energy = E0;
    m.scales.time = t0_fs;
    m.scales.mass = raw.oscillator_mass;
    return m;
}

RawModelParameters to_input_units(const ModelConfig& model) {
    RawModelParameters raw;
    raw.natural_units = !model.scales.physical;
    raw.dimension = model.dimension;
    raw.level_cap = model.level_cap;
    raw.incident = model.incident;

    const double L = model.scales.length;
    const double E = model.scales.energy;
    const double M = model.scales.mass;

    raw.particle_mass = model.particle_mass * M;
    raw.oscillator_mass = M;
    raw.frequency = E;
    raw.potential_range = model.potential_range * L;
    raw.coupling = model.coupling * E * std::pow(L, model.dimension);
    raw.sites = model.sites;
    for (auto& s : raw.sites)
        for (int j = 0; j < model.dimension; ++j) s[j] *= L;
    for (int j = 0; j < model.dimension; ++j) {
        raw.incident.wavevector[j] /= L;
        raw.incident.center[j] *= L;
    }
    raw.incident.width = model.incident.width * L;
    if (model.incident.total_wavenumber) raw.incident.total_wavenumber = *model.incident.total_wavenumber / L;
    if (model.time_window) raw.time_window = *model.time_window * model.scales.time;
    return raw;
}

}  // namespace oscatter
