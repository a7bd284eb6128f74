#pragma once

#include <vector>

#include "oscatter/grid.hpp"

namespace oscatter {

struct FarFieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Detection plane at distance L along the (off-grid) propagation axis.
// Pixel centers are transverse offsets in the grid's coordinate space.
struct DetectorPlane {
    double distance = 0;
    std::vector<std::array<double, 3>> pixel_centers;
    double pixel_width = 0;
    int dim = 1;

    void validate() const;
    // transverse momentum transfer at a pixel for outgoing wavenumber k
    std::array<double, 3> pixel_q(std::size_t p, double k_out) const;
};

// Fourier transform of the source at arbitrary wavevectors,
// A(q) = sum_x s(x) e^{-i q.x} h^d. The q = 0 value is the spatial integral
// of the source.
std::vector<cdouble> far_field_q(const ScalarField& source, const std::vector<std::array<double, 3>>& qs);

// Fraunhofer amplitude per pixel; |A|^2 is the arrival density up to one
// global constant. Throws if the plane violates its far-field invariant
// (distance < 100x the source support diameter).
std::vector<cdouble> far_field(const ScalarField& source, const DetectorPlane& plane);

// Diameter of the region holding all |amplitude| above rel_threshold * max.
double support_diameter(const ScalarField& field, double rel_threshold = 1e-9);

}  // namespace oscatter
