#pragma once

#include <array>

#include "oscatter/math_util.hpp"
#include "oscatter/multi_index.hpp"

namespace oscatter {

// Single-site momentum-space transition envelope
//   F_n(q) = prod_j (i q_j ell / sqrt(2))^{n_j} e^{-q_j^2 ell^2 / 4} / sqrt(n_j!),
// the closed form of the integral of e^{i q.y} phi_n(y) phi_0(y) over d axes
// with per-axis physically normalized eigenfunctions. Verified against direct
// quadrature in the test suite before anything relies on it.
cdouble plane_wave_form_factor(const MultiIndex& n, const std::array<double, 3>& q, double ell);

// |F_n(q)|^2 summed over all n with |n| = total on one axis reduces to the
// Poisson law e^{-eta} eta^n / n! with eta = |q|^2 ell^2 / 2.
inline double form_factor_eta(const std::array<double, 3>& q, int dim, double ell) {
    double q2 = 0;
    for (int j = 0; j < dim; ++j) q2 += q[j] * q[j];
    return 0.5 * q2 * ell * ell;
}

// Mass of |F_n|^2 with any per-axis component above cap, bounded by the
// Poisson survival function at the total eta (exact in 1D, an upper-ish
// estimate in higher d where the per-axis caps bite sooner).
inline double form_factor_tail_mass(int cap, double eta) { return poisson_sf(cap, eta); }

}  // namespace oscatter
