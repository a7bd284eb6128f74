#include "oscatter/sources.hpp"

#include <cmath>
#include <stdexcept>

#include "oscatter/coupling.hpp"

namespace oscatter {

namespace {

void check_site(const ModelConfig& model, int site) {
    if (site < 0 || static_cast<std::size_t>(site) >= model.sites.size())
        throw std::out_of_range("source: site index out of range");
}

}  // namespace

ScalarField inelastic_source(const ScalarField& psi_in, const ModelConfig& model, int site,
                             const MultiIndex& level) {
    check_site(model, site);
    if (level.is_zero()) throw KinematicsError("inelastic_source: level must be nonzero");
    const double omega = model.frequency * level.total();
    const auto k_out = try_outgoing_wavenumber(psi_in.k_out, model.particle_mass, omega);
    if (!k_out) throw KinematicsError("channel closed");

    const auto basis = model.basis();
    const cdouble pref = first_order_prefactor(model.particle_mass, model.coupling);
    ScalarField out(psi_in.grid, ChannelTag{false, site, level}, *k_out);
    const std::size_t npt = psi_in.grid.size();
    for (std::size_t i = 0; i < npt; ++i) {
        const auto x = psi_in.grid.point(i);
        out.amp[i] = pref * basis.pair_density(level, x, model.sites[site]) * psi_in.amp[i];
    }
    return out;
}

ScalarField elastic_source(const ScalarField& psi_in, const ModelConfig& model) {
    const auto basis = model.basis();
    const cdouble pref = first_order_prefactor(model.particle_mass, model.coupling);
    const MultiIndex zero = MultiIndex::zero(model.dimension);
    ScalarField out(psi_in.grid, ChannelTag{true, -1, zero}, psi_in.k_out);
    const std::size_t npt = psi_in.grid.size();
    for (std::size_t i = 0; i < npt; ++i) {
        const auto x = psi_in.grid.point(i);
        double dens = 0;
        for (const auto& a : model.sites) dens += basis.pair_density(zero, x, a);
        out.amp[i] = pref * dens * psi_in.amp[i];
    }
    return out;
}

ScalarField smeared_inelastic_source(const ScalarField& psi_in, const ModelConfig& model, int site,
                                     const MultiIndex& level) {
    check_site(model, site);
    if (level.is_zero()) throw KinematicsError("smeared_inelastic_source: level must be nonzero");
    const double omega = model.frequency * level.total();
    const auto k_out = try_outgoing_wavenumber(psi_in.k_out, model.particle_mass, omega);
    if (!k_out) throw KinematicsError("channel closed");

    const cdouble pref = first_order_prefactor(model.particle_mass, model.coupling);
    ScalarField out(psi_in.grid, ChannelTag{false, site, level}, *k_out);
    const std::size_t npt = psi_in.grid.size();
    for (std::size_t i = 0; i < npt; ++i) {
        const auto x = psi_in.grid.point(i);
        out.amp[i] = pref * smeared_pair_density(model, level, x, model.sites[site]) * psi_in.amp[i];
    }
    return out;
}

}  // namespace oscatter
