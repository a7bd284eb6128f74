#include "oscatter/coupling.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oscatter/math_util.hpp"

namespace oscatter {

namespace {

// physicists' Hermite polynomial values H_0..H_jmax at x
void hermite_poly_all(int jmax, double x, std::vector<double>& h) {
    h.resize(jmax + 1);
    h[0] = 1.0;
    if (jmax >= 1) h[1] = 2.0 * x;
    for (int j = 1; j < jmax; ++j) h[j + 1] = 2.0 * x * h[j] - 2.0 * j * h[j - 1];
}

double binom(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b *= static_cast<double>(n - k + i) / i;
    return b;
}

}  // namespace

double smeared_pair_element(int n, int m, double u, double ell, double sigma) {
    if (n < 0 || m < 0) throw std::invalid_argument("smeared_pair_element: negative level");
    if (ell <= 0 || sigma <= 0) throw std::invalid_argument("smeared_pair_element: non-positive scale");

    const double a = 1.0 + ell * ell / (2.0 * sigma * sigma);
    const double b = u * ell / (sigma * sigma);
    const double c0 = -u * u / (2.0 * sigma * sigma);
    const double s = b / (2.0 * a);
    const double expC = std::exp(c0 + a * s * s);
    const double lambda = (a - 1.0) / a;
    const double sqrt_lambda = std::sqrt(lambda);

    std::vector<double> H;
    hermite_poly_all(n + m, s / sqrt_lambda, H);

    // N_n N_m from the normalized pair (the 1/ell of the physical pair is
    // cancelled by the substitution Jacobian), Gaussian measure, and the
    // completed-square prefactor; the 1/ell of the sigma->0 limit re-emerges
    // from sqrt(pi/a)/sqrt(2 pi sigma^2).
    const double log_norm = -0.5 * ((n + m) * std::log(2.0) + std::lgamma(n + 1.0) + std::lgamma(m + 1.0))
                            - 0.5 * std::log(pi);
    const double front = std::exp(log_norm) * expC * std::sqrt(pi / a) / std::sqrt(2.0 * pi * sigma * sigma);

    double sum = 0.0;
    double lam_pow = std::pow(sqrt_lambda, n + m);
    for (int k = 0; k <= std::min(n, m); ++k) {
        const double coeff = binom(n, k) * binom(m, k) * std::exp(std::lgamma(k + 1.0)) * std::pow(2.0, k);
        sum += coeff * lam_pow * H[n + m - 2 * k];
        lam_pow /= lambda;
    }
    return front * sum;
}

double smeared_pair_density(const ModelConfig& model, const MultiIndex& n,
                            const std::array<double, 3>& x, const std::array<double, 3>& site) {
    double val = 1.0;
    const double ell = model.ell();
    for (int j = 0; j < model.dimension; ++j)
        val *= smeared_pair_element(n[j], 0, x[j] - site[j], ell, model.potential_range);
    return val;
}

}  // namespace oscatter
