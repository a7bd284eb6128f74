#pragma once

#include <array>

#include "oscatter/model.hpp"
#include "oscatter/multi_index.hpp"

namespace oscatter {

// 1D matrix element of the Gaussian potential between oscillator levels,
//   K_{nm}(u) = integral G_sigma(u - y) u_n(y) u_m(y) dy,
// with u_n the physically normalized eigenfunctions of length scale ell and
// G_sigma the unit-mass Gaussian of width sigma. Closed form via the Hermite
// product linearization H_m H_n = sum_k C(m,k) C(n,k) k! 2^k H_{m+n-2k} and
// the Gaussian-convolution identity
//   integral H_j(t) e^{-a(t-s)^2} dt = sqrt(pi/a) lambda^{j/2} H_j(s/sqrt(lambda)),
// lambda = (a-1)/a. Tends to u_n(u) u_m(u) as sigma -> 0.
double smeared_pair_element(int n, int m, double u, double ell, double sigma);

// d-dimensional smeared transition density (V/g convolved with the pair
// density): product of per-axis 1D elements. Equals pair_density in the
// sigma -> 0 limit.
double smeared_pair_density(const ModelConfig& model, const MultiIndex& n,
                            const std::array<double, 3>& x, const std::array<double, 3>& site);

}  // namespace oscatter
