#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oscatter/form_factor.hpp"
#include "oscatter/hermite.hpp"
#include "oscatter/linalg.hpp"
#include "oscatter/math_util.hpp"
#include "oscatter/model.hpp"

using namespace oscatter;

TEST_CASE("jacobi eigensolver reproduces a known spectrum") {
    // [[2,1],[1,2]] -> 1, 3
    std::vector<double> a{2, 1, 1, 2};
    auto eig = jacobi_eigen(a, 2);
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(3.0).epsilon(1e-14));

    // residual check A v = lambda v on a 6x6 built from a quadratic form
    const int n = 6;
    std::vector<double> m(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i * n + j] = 1.0 / (1.0 + std::abs(i - j)) + (i == j ? i : 0);
    auto e6 = jacobi_eigen(m, n);
    for (int k = 0; k < n; ++k) {
        for (int r = 0; r < n; ++r) {
            double av = 0;
            for (int c = 0; c < n; ++c) av += m[r * n + c] * e6.vec(c, k);
            CHECK(av == doctest::Approx(e6.values[k] * e6.vec(r, k)).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("gauss-hermite rule integrates exactly") {
    auto rule = gauss_hermite(12);
    double m0 = 0, m2 = 0, m10 = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        m0 += rule.weights[i];
        m2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
        m10 += rule.weights[i] * std::pow(rule.nodes[i], 10);
    }
    CHECK(m0 == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(pi)).epsilon(1e-13));
    // integral x^10 e^{-x^2} = 945/32 sqrt(pi)
    CHECK(m10 == doctest::Approx(945.0 / 32.0 * std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("eigenfunction values at the origin") {
    CHECK(hermite_function(0, 0.0) == doctest::Approx(std::pow(pi, -0.25)).epsilon(1e-15));
    CHECK(hermite_function(1, 0.0) == 0.0);
    CHECK_THROWS_AS(hermite_function(-1, 0.0), std::out_of_range);
    OscillatorBasis basis(1, 1.0, 1.0, 8);
    CHECK_THROWS_AS(basis.eigenfunction(9, 0.0), std::out_of_range);
}

TEST_CASE("orthonormality by gauss-hermite quadrature") {
    const int cap = 12;
    auto rule = gauss_hermite(cap + 1);
    std::vector<double> vals(cap + 1);
    for (int i = 0; i <= cap; ++i)
        for (int j = 0; j <= cap; ++j) {
            double acc = 0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                hermite_function_all(cap, rule.nodes[q], vals.data());
                // strip the e^{-xi^2} weight carried by the pair of functions
                acc += rule.weights[q] * vals[i] * vals[j] * std::exp(rule.nodes[q] * rule.nodes[q]);
            }
            CHECK(std::abs(acc - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("second-to-ground overlap vanishes") {
    auto rule = gauss_hermite(32);
    double acc = 0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = rule.nodes[q];
        acc += rule.weights[q] * hermite_function(2, x) * hermite_function(0, x) * std::exp(x * x);
    }
    CHECK(std::abs(acc) < 1e-12);
}

TEST_CASE("plane-wave form factor against quadrature") {
    const double q = 1.0;
    // closed form at n = 1, ell = 1
    auto f1 = plane_wave_form_factor(MultiIndex(1, {1, 0, 0}), {q, 0, 0}, 1.0);
    CHECK(std::norm(f1) == doctest::Approx(std::exp(-0.5) / 2.0).epsilon(1e-12));

    // independent quadrature of phi_1 phi_0 e^{iqy}
    auto rule = gauss_hermite(60);
    cdouble acc(0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double y = rule.nodes[k];
        const double pair = hermite_function(1, y) * hermite_function(0, y) * std::exp(y * y);
        acc += rule.weights[k] * pair * std::exp(cdouble(0, q * y));
    }
    CHECK(std::abs(acc - f1) < 1e-10);

    SUBCASE("normalization and orthogonality at q = 0") {
        CHECK(plane_wave_form_factor(MultiIndex::zero(3), {0, 0, 0}, 1.0) == cdouble(1.0, 0.0));
        CHECK(std::abs(plane_wave_form_factor(MultiIndex(2, {1, 1, 0}), {0, 0, 0}, 0.7)) == 0.0);
    }
}

TEST_CASE("form-factor completeness at several momenta") {
    for (double q : {0.1, 1.0, 3.0}) {
        const double eta = 0.5 * q * q;
        double sum = 0;
        for (int n = 0; n <= 60; ++n)
            sum += std::norm(plane_wave_form_factor(MultiIndex(1, {n, 0, 0}), {q, 0, 0}, 1.0));
        CHECK(form_factor_tail_mass(60, eta) < 1e-10);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("poisson helpers") {
    CHECK(poisson_pmf(0, 0.0) == 1.0);
    CHECK(poisson_pmf(3, 2.0) == doctest::Approx(std::exp(-2.0) * 8.0 / 6.0).epsilon(1e-14));
    double cdf = 0;
    for (int j = 0; j <= 8; ++j) cdf += poisson_pmf(j, 1.0);
    CHECK(poisson_sf(8, 1.0) == doctest::Approx(1.0 - cdf).epsilon(1e-9));
}

TEST_CASE("multi-index basics") {
    auto levels = enumerate_levels(2, 2);
    CHECK(levels.size() == 9);
    CHECK(levels.front().is_zero());
    CHECK(MultiIndex(3, {2, 1, 0}).total() == 3);
    CHECK_THROWS(MultiIndex(1, {-1, 0, 0}));
}

TEST_CASE("transition frequencies") {
    OscillatorBasis basis(3, 1.0, 1.0, 8);
    CHECK(basis.transition_frequency(MultiIndex::zero(3)) == 0.0);
    CHECK(basis.transition_frequency(MultiIndex(3, {1, 0, 0})) == doctest::Approx(1.0));
    CHECK(basis.transition_frequency(MultiIndex(3, {2, 1, 0})) == doctest::Approx(3.0));
    CHECK(basis.energy(MultiIndex::zero(3)) == doctest::Approx(1.5));
    // minimum inelastic transfer is one quantum
    for (const auto& n : enumerate_levels(3, 3))
        if (!n.is_zero()) CHECK(basis.transition_frequency(n) >= 1.0);
}

TEST_CASE("pair density values") {
    OscillatorBasis basis(2, 1.0, 1.0, 8);
    const std::array<double, 3> site{0.3, -0.2, 0};
    // squared ground state at the center: pi^{-d/2} ell^{-d}
    CHECK(basis.pair_density(MultiIndex::zero(2), site, site) ==
          doctest::Approx(1.0 / pi).epsilon(1e-14));
    // odd component at the center vanishes
    CHECK(basis.pair_density(MultiIndex(2, {1, 0, 0}), site, site) == 0.0);

    // ground-state normalization by direct quadrature
    OscillatorBasis b1(1, 2.0, 3.0, 4);  // ell != 1
    double acc = 0;
    const double h = 1e-3;
    for (double x = -3; x <= 3; x += h) acc += b1.pair_density(MultiIndex::zero(1), {x, 0, 0}, {0, 0, 0}) * h;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("build_model identity scaling and errors") {
    RawModelParameters raw;
    raw.natural_units = true;
    raw.sites = {{0, 0, 0}};
    raw.incident.wavevector = {1.0, 0, 0};
    ModelConfig m = build_model(raw);
    CHECK(m.ell() == doctest::Approx(1.0));
    CHECK(m.particle_mass == doctest::Approx(1.0));
    CHECK(m.scales.length == doctest::Approx(1.0));

    SUBCASE("non-positive frequency") {
        raw.frequency = 0.0;
        CHECK_THROWS_WITH_AS(build_model(raw), "non-positive frequency", ModelError);
    }
    SUBCASE("duplicate sites") {
        raw.sites = {{0, 0, 0}, {0, 0, 0}};
        CHECK_THROWS_WITH_AS(build_model(raw), "duplicate sites", ModelError);
    }
    SUBCASE("empty site list") {
        raw.sites.clear();
        CHECK_THROWS_WITH_AS(build_model(raw), "empty site list", ModelError);
    }
    SUBCASE("non-positive potential range") {
        raw.potential_range = 0.0;
        CHECK_THROWS_WITH_AS(build_model(raw), "non-positive potential range", ModelError);
    }
    SUBCASE("non-positive particle mass") {
        raw.particle_mass = -1.0;
        CHECK_THROWS_WITH_AS(build_model(raw), "non-positive particle mass", ModelError);
    }
}

TEST_CASE("electron-scale preset lands at angstrom lengths") {
    RawModelParameters raw;
    raw.natural_units = false;
    raw.particle_mass = 511.0;     // keV/c^2
    raw.oscillator_mass = 511.0;
    raw.frequency = 1.0;           // hbar*Omega = 1 eV
    raw.potential_range = 0.02;    // nm
    raw.coupling = 1.0;
    raw.sites = {{0, 0, 0}};
    raw.incident.wavevector = {10.0, 0, 0};  // 1/nm
    ModelConfig m = build_model(raw);

    const double expected_ell = hbar_c_eV_nm / std::sqrt(511e3 * 1.0);
    CHECK(m.scales.length == doctest::Approx(expected_ell).epsilon(1e-12));
    CHECK(m.scales.length > 0.1);  // above 1 Angstrom
    CHECK(m.scales.length < 1.0);  // below 1 nm
    CHECK(m.particle_mass == doctest::Approx(1.0));
}

TEST_CASE("unit round trip") {
    RawModelParameters raw;
    raw.natural_units = false;
    raw.dimension = 2;
    raw.particle_mass = 511.0;
    raw.oscillator_mass = 1022.0;
    raw.frequency = 0.75;
    raw.coupling = 2.5;
    raw.potential_range = 0.013;
    raw.level_cap = 6;
    raw.sites = {{1.0, -2.0, 0}, {3.5, 0.25, 0}};
    raw.incident.kind = IncidentWave::Kind::gaussian_packet;
    raw.incident.wavevector = {7.0, 1.0, 0};
    raw.incident.center = {-4.0, 0.5, 0};
    raw.incident.width = 1.7;
    raw.incident.total_wavenumber = 9.0;
    raw.time_window = 12.0;

    RawModelParameters back = to_input_units(build_model(raw));
    CHECK(back.particle_mass == doctest::Approx(raw.particle_mass).epsilon(1e-12));
    CHECK(back.oscillator_mass == doctest::Approx(raw.oscillator_mass).epsilon(1e-12));
    CHECK(back.frequency == doctest::Approx(raw.frequency).epsilon(1e-12));
    CHECK(back.coupling == doctest::Approx(raw.coupling).epsilon(1e-12));
    CHECK(back.potential_range == doctest::Approx(raw.potential_range).epsilon(1e-12));
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < 2; ++j)
            CHECK(back.sites[s][j] == doctest::Approx(raw.sites[s][j]).epsilon(1e-12));
    for (int j = 0; j < 2; ++j) {
        CHECK(back.incident.wavevector[j] == doctest::Approx(raw.incident.wavevector[j]).epsilon(1e-12));
        CHECK(back.incident.center[j] == doctest::Approx(raw.incident.center[j]).epsilon(1e-12));
    }
    CHECK(back.incident.width == doctest::Approx(raw.incident.width).epsilon(1e-12));
    CHECK(*back.incident.total_wavenumber == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(*back.time_window == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("full-precision formatting round trips") {
    for (double v : {1.0 / 3.0, 2.5e-17, 1e300, -0.1, 123456789.123456}) {
        CHECK(std::stod(format_full(v)) == v);
    }
}

TEST_CASE("one quantum is the minimum transfer, met only at |n| = 1") {
    OscillatorBasis basis(3, 1.0, 2.5, 4);
    for (const auto& n : enumerate_levels(3, 4)) {
        if (n.is_zero()) continue;
        const double w = basis.transition_frequency(n);
        CHECK(w >= 2.5);
        CHECK((w == 2.5) == (n.total() == 1));
    }
}
