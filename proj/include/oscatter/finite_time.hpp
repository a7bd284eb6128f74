#pragma once

#include "oscatter/grid.hpp"
#include "oscatter/model.hpp"
#include "oscatter/multi_index.hpp"

namespace oscatter {

struct FiniteTimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FiniteTimeOptions {
    // cap on the k x k' quadrature size for packet incidents
    std::size_t quadrature_budget = std::size_t{1} << 26;
};

// First-order scattered field for channel (site, level) after a finite time
// window T, with the energy-window (sinc) factor kept. 1D, evaluated in k
// space on the grid's DFT frequencies; Schrodinger-picture phases. Plane-wave
// incidents take an analytic single-k' path; packets use the full double
// quadrature subject to the budget guard.
ScalarField finite_time_amplitude(const ModelConfig& model, const Grid& grid, int site,
                                  const MultiIndex& level, double T,
                                  const FiniteTimeOptions& opt = {});

// T -> infinity prediction: the cutout source (finite-range coupling profile
// times the incident wave) convolved with the outgoing kernel
// e^{i k_out |u|} m / (i k_out), by direct position-space quadrature.
// Plane-wave incidents only; open channels only.
ScalarField delta_limit_prediction(const ModelConfig& model, const Grid& grid, int site,
                                   const MultiIndex& level);

// Relative L2 distance restricted to |x - center| <= radius, after removing
// one global phase (the unobservable energy phase between the conventions).
double windowed_relative_distance(const ScalarField& trial, const ScalarField& reference,
                                  double center, double radius);

}  // namespace oscatter
