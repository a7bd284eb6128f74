#include "oscatter/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include "oscatter/linalg.hpp"
#include "oscatter/math_util.hpp"

namespace oscatter {

double hermite_function(int n, double xi) {
    if (n < 0) throw std::out_of_range("hermite_function: negative order");
    const double h0 = std::pow(pi, -0.25) * std::exp(-0.5 * xi * xi);
    if (n == 0) return h0;
    double prev = h0;
    double cur = std::sqrt(2.0) * xi * h0;
    for (int k = 1; k < n; ++k) {
        double next = xi * std::sqrt(2.0 / (k + 1.0)) * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void hermite_function_all(int nmax, double xi, double* out) {
    out[0] = std::pow(pi, -0.25) * std::exp(-0.5 * xi * xi);
    if (nmax == 0) return;
    out[1] = std::sqrt(2.0) * xi * out[0];
    for (int k = 1; k < nmax; ++k)
        out[k + 1] = xi * std::sqrt(2.0 / (k + 1.0)) * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
}

GaussHermiteRule gauss_hermite(int npoints) {
    if (npoints < 1) throw std::invalid_argument("gauss_hermite: need at least one point");
    const int n = npoints;
    // Jacobi matrix for physicists' Hermite: diagonal 0, off-diagonal sqrt(k/2)
    std::vector<double> jac(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 1; k < n; ++k) {
        double b = std::sqrt(k / 2.0);
        jac[static_cast<std::size_t>(k) * n + (k - 1)] = b;
        jac[static_cast<std::size_t>(k - 1) * n + k] = b;
    }
    SymmetricEigen eig = jacobi_eigen(std::move(jac), n);
    GaussHermiteRule rule;
    rule.nodes = eig.values;
    rule.weights.resize(n);
    const double mu0 = std::sqrt(pi);  // integral of the weight e^{-x^2}
    for (int k = 0; k < n; ++k) {
        double v0 = eig.vec(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

OscillatorBasis::OscillatorBasis(int dimension, double oscillator_mass, double frequency, int level_cap)
    : dim_(dimension), mass_(oscillator_mass), frequency_(frequency), level_cap_(level_cap) {
    if (dimension < 1 || dimension > 3) throw std::invalid_argument("OscillatorBasis: dimension must be 1..3");
    if (oscillator_mass <= 0) throw std::invalid_argument("OscillatorBasis: non-positive mass");
    if (frequency <= 0) throw std::invalid_argument("OscillatorBasis: non-positive frequency");
    if (level_cap < 1) throw std::invalid_argument("OscillatorBasis: level cap must be >= 1");
    ell_ = 1.0 / std::sqrt(oscillator_mass * frequency);
}

double OscillatorBasis::eigenfunction(int n, double xi) const {
    if (n < 0 || n > level_cap_) throw std::out_of_range("OscillatorBasis: level out of range");
    return hermite_function(n, xi);
}

double OscillatorBasis::energy(const MultiIndex& n) const {
    return frequency_ * (n.total() + 0.5 * dim_);
}

double OscillatorBasis::transition_frequency(const MultiIndex& n) const {
    return frequency_ * n.total();
}

double OscillatorBasis::pair_density(const MultiIndex& n, const std::array<double, 3>& x,
                                     const std::array<double, 3>& site) const {
    double val = 1.0;
    for (int j = 0; j < dim_; ++j) {
        const double xi = (x[j] - site[j]) / ell_;
        val *= eigenfunction(n[j], xi) * eigenfunction(0, xi) / ell_;
    }
    return val;
}

}  // namespace oscatter
