#pragma once

#include <array>
#include <vector>

#include "oscatter/multi_index.hpp"

namespace oscatter {

// Orthonormal 1D harmonic-oscillator eigenfunction phi_n(xi), unit length
// scale: phi_0 = pi^{-1/4} exp(-xi^2/2), normalized three-term recurrence
//   phi_{n+1} = xi*sqrt(2/(n+1))*phi_n - sqrt(n/(n+1))*phi_{n-1}.
// Stable for the n <= ~60 range used here (no factorials appear).
double hermite_function(int n, double xi);

// All of phi_0..phi_nmax at xi in one recurrence pass.
void hermite_function_all(int nmax, double xi, double* out);

// Gauss-Hermite rule: integrates f(x) e^{-x^2} dx exactly for polynomial f of
// degree <= 2*npoints-1. Nodes/weights from the Jacobi-matrix (Golub-Welsch)
// route via the in-house symmetric eigensolver.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int npoints);

// Oscillator basis for a scattering-center array: length scale
// ell = 1/sqrt(M*Omega) (hbar = 1), per-axis eigenfunctions normalized in
// physical length, energies E_n = Omega*(|n| + d/2).
class OscillatorBasis {
  public:
    OscillatorBasis(int dimension, double oscillator_mass, double frequency, int level_cap);

    double ell() const { return ell_; }
    int level_cap() const { return level_cap_; }
    int dimension() const { return dim_; }

    // checked 1D factor at scaled coordinate xi = (y-a)/ell
    double eigenfunction(int n, double xi) const;

    double energy(const MultiIndex& n) const;
    // omega_{n,0} = (E_n - E_0)/hbar = Omega * |n|
    double transition_frequency(const MultiIndex& n) const;

    // Transition density phi_n(x-a) phi_0(x-a), product over axes, with the
    // physical 1/ell normalization per axis. Real by the convention used here.
    double pair_density(const MultiIndex& n, const std::array<double, 3>& x,
                        const std::array<double, 3>& site) const;

  private:
    int dim_;
    double mass_, frequency_, ell_;
    int level_cap_;
};

}  // namespace oscatter
