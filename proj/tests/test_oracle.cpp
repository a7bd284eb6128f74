#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oscatter/fft.hpp"
#include "oscatter/model.hpp"
#include "oscatter/oracle.hpp"

using namespace oscatter;

namespace {

ModelConfig packet_model(double g, double k0, double center, double width,
                         std::vector<std::array<double, 3>> sites = {{0, 0, 0}}) {
    RawModelParameters raw;
    raw.natural_units = true;
    raw.particle_mass = 1.0;
    raw.coupling = g;
    raw.potential_range = 0.4;
    raw.level_cap = 8;
    raw.sites = std::move(sites);
    raw.incident.kind = IncidentWave::Kind::gaussian_packet;
    raw.incident.wavevector = {k0, 0, 0};
    raw.incident.center = {center, 0, 0};
    raw.incident.width = width;
    raw.incident.normalize = true;
    if (k0 == 0.0) raw.incident.total_wavenumber = 1.0;
    return build_model(raw);
}

double total(const std::vector<double>& v, int from) {
    double s = 0;
    for (std::size_t i = from; i < v.size(); ++i) s += v[i];
    return s;
}

}  // namespace

TEST_CASE("fft matches a naive dft and round trips") {
    const std::size_t n = 64;
    Fft fft(n);
    std::vector<cdouble> x(n), ref(n);
    for (std::size_t j = 0; j < n; ++j)
        x[j] = cdouble(std::sin(0.31 * j) + 0.2, std::cos(1.7 * j));
    for (std::size_t k = 0; k < n; ++k) {
        cdouble acc(0);
        for (std::size_t j = 0; j < n; ++j)
            acc += x[j] * std::exp(cdouble(0, -2.0 * pi * static_cast<double>(j * k % n) / n));
        ref[k] = acc;
    }
    std::vector<cdouble> y = x;
    fft.forward(y.data());
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - ref[k]) < 1e-10);
    fft.inverse(y.data());
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(y[j] - x[j]) < 1e-12);
    CHECK_THROWS(Fft(48));

    const auto ks = Fft::frequencies(8, 0.5);
    CHECK(ks[0] == 0.0);
    CHECK(ks[1] == doctest::Approx(2 * pi / 4.0));
    CHECK(ks[7] == doctest::Approx(-2 * pi / 4.0));
}

TEST_CASE("initial state starts in the ground channel") {
    ModelConfig m = packet_model(0.02, 2.0, -10.0, 3.0);
    Grid g(1, {-40, 0, 0}, 80.0 / 128, {128, 1, 1});
    CoupledState st = initial_state(m, g, 3);
    CHECK(st.channels.size() == 4);
    auto p = st.channel_probabilities();
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(total(p, 1) == doctest::Approx(0.0));
    CHECK(st.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("plane-wave initial state is rejected") {
        ModelConfig mp = m;
        mp.incident.kind = IncidentWave::Kind::plane_wave;
        CHECK_THROWS_AS(initial_state(mp, g, 3), OracleError);
    }
}

TEST_CASE("time-step resolution bound is enforced") {
    ModelConfig m = packet_model(0.02, 2.0, -10.0, 3.0);
    Grid g(1, {-40, 0, 0}, 80.0 / 128, {128, 1, 1});
    CoupledState st = initial_state(m, g, 2);
    EvolveOptions opt;
    opt.total_time = 1.0;
    opt.time_step = 1.0;  // far beyond 0.02*min(1/Omega, m h^2/pi^2)
    CHECK_THROWS_AS(evolve(st, m, opt), OracleError);
}

TEST_CASE("free evolution: constant channel populations and gaussian spreading") {
    // g = 0, packet at rest with width 3
    ModelConfig m = packet_model(0.0, 0.0, 0.0, 3.0);
    const int n = 256;
    Grid g(1, {-40, 0, 0}, 80.0 / n, {n, 1, 1});
    CoupledState st = initial_state(m, g, 2);
    EvolveOptions opt;
    opt.time_step = 5.0 / 25600;  // divides the total time exactly
    opt.total_time = 5.0;
    const EvolveDiagnostics diag = evolve(st, m, opt);

    CHECK(diag.norm_drift < 1e-8);
    CHECK(diag.steps >= 10000);  // unitarity held over 1e4+ steps

    auto p = st.channel_probabilities();
    CHECK(total(p, 1) == 0.0);  // no coupling, exactly zero transfer
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-10));

    // measured width against sigma(t)^2 = sigma^2 (1 + (t/(2 m sigma^2))^2)
    double w0 = 0, w1 = 0, w2 = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.point(i)[0];
        const double w = std::norm(st.amps[0][i]);
        w0 += w;
        w1 += w * x;
        w2 += w * x * x;
    }
    const double var = w2 / w0 - (w1 / w0) * (w1 / w0);
    const double expected = 9.0 * (1.0 + std::pow(st.time / (2.0 * 9.0), 2));
    CHECK(var == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("weak coupling: quadratic response and first-order agreement") {
    // k0 = 2.4 opens levels 1 and 2 well away from threshold
    const double g_weak = 0.02;
    ModelConfig m = packet_model(g_weak, 2.4, -20.0, 5.0);
    const int n = 256;
    Grid grid(1, {-70, 0, 0}, 150.0 / n, {n, 1, 1});
    EvolveOptions opt;
    opt.time_step = 5e-4;
    opt.total_time = 20.0;
    opt.per_site_level_cap = 4;

    CoupledState st = initial_state(m, grid, opt.per_site_level_cap);
    const EvolveDiagnostics diag = evolve(st, m, opt);
    CHECK(diag.norm_drift < 1e-8);
    CHECK(diag.leakage < 1e-6);
    CHECK(diag.boundary_monitor < 1e-6);
    const auto p = st.channel_probabilities();
    INFO("P(1) = ", p[1], " P(2) = ", p[2]);
    CHECK(p[1] <= 1e-3);
    CHECK(p[1] > 1e-8);

    SUBCASE("doubling the coupling quadruples the transition probability") {
        ModelConfig m2 = m;
        m2.coupling = 2.0 * g_weak;
        CoupledState st2 = initial_state(m2, grid, opt.per_site_level_cap);
        evolve(st2, m2, opt);
        const auto p2 = st2.channel_probabilities();
        CHECK(p2[1] <= 1e-3);
        CHECK(p2[1] / p[1] == doctest::Approx(4.0).epsilon(0.02));
    }

    SUBCASE("independent first-order quadrature agrees to five percent") {
        const auto fo = first_order_prediction(m, grid, opt.total_time, 400, opt.per_site_level_cap);
        for (int lev = 1; lev <= 2; ++lev) {
            INFO("level ", lev, ": evolved ", p[lev], " first-order ", fo[lev]);
            CHECK(std::abs(p[lev] - fo[lev]) / fo[lev] < 0.05);
        }
    }
}

TEST_CASE("strang splitting is second order in the time step") {
    ModelConfig m = packet_model(0.03, 2.0, -6.0, 2.0);
    const int n = 64;
    Grid grid(1, {-20, 0, 0}, 40.0 / n, {n, 1, 1});
    EvolveOptions opt;
    opt.per_site_level_cap = 4;
    opt.total_time = 2.0;

    auto run = [&](double dt) {
        CoupledState st = initial_state(m, grid, opt.per_site_level_cap);
        EvolveOptions o = opt;
        o.time_step = dt;
        evolve(st, m, o);
        return st;
    };
    const double dt0 = 6.25e-4;  // bound here is 0.02*h^2/pi^2 = 7.9e-4
    CoupledState ref = run(dt0 / 8);
    auto err = [&](const CoupledState& st) {
        double e2 = 0;
        for (std::size_t c = 0; c < st.channels.size(); ++c)
            for (std::size_t i = 0; i < st.amps[c].size(); ++i)
                e2 += std::norm(st.amps[c][i] - ref.amps[c][i]);
        return std::sqrt(e2 * grid.cell_volume());
    };
    const double e1 = err(run(dt0));
    const double e2 = err(run(dt0 / 2));
    INFO("e(dt) = ", e1, " e(dt/2) = ", e2, " ratio = ", e1 / e2);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.0);
}

TEST_CASE("two sites: joint excitation is quartic and negligible") {
    const double g = 0.0015;
    ModelConfig m = packet_model(g, 2.4, -30.0, 5.0, {{-8, 0, 0}, {8, 0, 0}});
    const int n = 256;
    Grid grid(1, {-80, 0, 0}, 170.0 / n, {n, 1, 1});
    EvolveOptions opt;
    opt.time_step = 8e-4;
    opt.total_time = 25.0;
    opt.per_site_level_cap = 2;

    CoupledState st = initial_state(m, grid, opt.per_site_level_cap);
    const EvolveDiagnostics diag = evolve(st, m, opt);
    CHECK(diag.norm_drift < 1e-8);

    const auto p = st.channel_probabilities();
    double single = 0, both = 0;
    for (std::size_t c = 0; c < st.channels.size(); ++c) {
        const auto& lv = st.channels[c].site_levels;
        const bool s1 = lv[0] > 0, s2 = lv[1] > 0;
        if (s1 && s2)
            both += p[c];
        else if (s1 || s2)
            single += p[c];
    }
    INFO("single ", single, " both ", both);
    CHECK(single > 1e-9);
    CHECK(both < 1e-6 * single);
}

TEST_CASE("absorbing boundary keeps accounts straight") {
    // packet runs into the right edge; the mask removes it smoothly
    ModelConfig m = packet_model(0.0, 2.0, 0.0, 2.0);
    const int n = 128;
    Grid grid(1, {-20, 0, 0}, 40.0 / n, {n, 1, 1});
    EvolveOptions opt;
    opt.time_step = 1.9e-4;
    opt.total_time = 20.0;
    opt.per_site_level_cap = 1;
    opt.absorber = true;
    opt.absorber_width = 6.0;

    CoupledState st = initial_state(m, grid, opt.per_site_level_cap);
    const EvolveDiagnostics diag = evolve(st, m, opt);
    CHECK(diag.absorbed > 0.9);  // most of the packet left the box
    CHECK(diag.norm_drift < 1e-8);
    CHECK(st.norm_squared() + st.absorbed == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("first-order prediction is exactly quadratic in the coupling") {
    ModelConfig m = packet_model(0.02, 2.4, -10.0, 3.0);
    const int n = 128;
    Grid grid(1, {-40, 0, 0}, 80.0 / n, {n, 1, 1});
    const auto fo1 = first_order_prediction(m, grid, 8.0, 200, 3);
    ModelConfig m2 = m;
    m2.coupling *= 3.0;
    const auto fo2 = first_order_prediction(m2, grid, 8.0, 200, 3);
    for (int lev = 1; lev <= 3; ++lev)
        if (fo1[lev] > 0) CHECK(fo2[lev] / fo1[lev] == doctest::Approx(9.0).epsilon(1e-10));
}
