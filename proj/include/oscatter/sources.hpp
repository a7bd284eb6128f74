#pragma once

#include "oscatter/grid.hpp"
#include "oscatter/kinematics.hpp"
#include "oscatter/model.hpp"

namespace oscatter {

// First-order prefactor m*g/(i*2*pi*hbar^2), hbar = 1. Only weight ratios are
// observable; the constant is fixed once so every route shares it.
inline cdouble first_order_prefactor(double particle_mass, double coupling) {
    return cdouble(0.0, -particle_mass * coupling / (2.0 * pi));
}

// Radius within which a site's transition densities live (used to bound
// quadrature windows; generous relative to the Hermite-Gaussian tails).
inline double locality_radius(const ModelConfig& model) {
    return 12.0 * model.ell() * std::sqrt(model.level_cap + 1.0);
}

// Piece of the incoming wave cut out by the (site, level) transition density,
// in the short-range delta limit. Requires an open channel and a nonzero level.
ScalarField inelastic_source(const ScalarField& psi_in, const ModelConfig& model, int site,
                             const MultiIndex& level);

// Coherent sum of the ground-state cutouts over all sites; stays elastic
// (k_out = k_in).
ScalarField elastic_source(const ScalarField& psi_in, const ModelConfig& model);

// Same as inelastic_source but with the finite-range Gaussian potential kept
// (transition density convolved with V/g); diagnostic for the delta-limit
// quality on a given model.
ScalarField smeared_inelastic_source(const ScalarField& psi_in, const ModelConfig& model, int site,
                                     const MultiIndex& level);

}  // namespace oscatter
