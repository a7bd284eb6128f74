#include "oscatter/finite_time.hpp"

#include <cmath>

#include "oscatter/coupling.hpp"
#include "oscatter/fft.hpp"
#include "oscatter/form_factor.hpp"
#include "oscatter/kinematics.hpp"

namespace oscatter {

namespace {

void check_1d(const ModelConfig& model, const Grid& grid) {
    if (model.dimension != 1 || grid.dim != 1)
        throw FiniteTimeError("finite-time amplitudes are a 1D validation tool");
}

// continuum Fourier transform of the coupling profile g*K_{lev,0}:
//   M(kappa) = g e^{-kappa^2 sigma^2/2} F_lev(-kappa)
cdouble coupling_transform(const ModelConfig& model, int lev, double kappa) {
    const MultiIndex n = MultiIndex::axis(1, 0, lev);
    const std::array<double, 3> q{-kappa, 0, 0};
    const double smear = std::exp(-0.5 * kappa * kappa * model.potential_range * model.potential_range);
    return model.coupling * smear * plane_wave_form_factor(n, q, model.ell());
}

}  // namespace

ScalarField finite_time_amplitude(const ModelConfig& model, const Grid& grid, int site,
                                  const MultiIndex& level, double T, const FiniteTimeOptions& opt) {
    check_1d(model, grid);
    if (T <= 0) throw FiniteTimeError("finite_time_amplitude: time window must be positive");
    if (site < 0 || static_cast<std::size_t>(site) >= model.sites.size())
        throw FiniteTimeError("finite_time_amplitude: site out of range");
    const double a = model.sites[static_cast<std::size_t>(site)][0];
    const int lev = level.total();
    const double omega = model.frequency * lev;
    const double m = model.particle_mass;

    const std::size_t n = grid.size();
    const double h = grid.spacing;
    Fft fft(n);
    const auto ks = Fft::frequencies(n, h);

    const bool plane = model.incident.kind == IncidentWave::Kind::plane_wave;
    if (!plane && n * n > opt.quadrature_budget)
        throw FiniteTimeError("finite_time_amplitude: k x k' quadrature exceeds the configured budget");

    // incident spectrum: single carrier for plane waves, grid FT for packets
    std::vector<double> kin;
    std::vector<cdouble> win;  // spectral weight, continuum convention
    if (plane) {
        kin.push_back(model.incident.wavevector[0]);
        win.push_back(cdouble(1.0, 0.0));
    } else {
        std::vector<cdouble> spec(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = grid.origin[0] + h * static_cast<double>(j);
            const double d = x - model.incident.center[0];
            spec[j] = std::exp(cdouble(-d * d / (4.0 * model.incident.width * model.incident.width),
                                       model.incident.wavevector[0] * x));
        }
        fft.forward(spec.data());
        kin.resize(n);
        win.resize(n);
        const double dk = 2.0 * pi / (static_cast<double>(n) * h);
        for (std::size_t j = 0; j < n; ++j) {
            kin[j] = ks[j];
            // continuum psi~(k') * dk'/2pi; h*DFT gives psi~ up to the origin phase
            win[j] = h * spec[j] * std::exp(cdouble(0, -ks[j] * grid.origin[0])) * (dk / (2.0 * pi));
        }
    }

    std::vector<cdouble> out_k(n, cdouble(0));
    for (std::size_t j = 0; j < n; ++j) {
        const double k = ks[j];
        const double ef = 0.5 * k * k / m + omega;
        cdouble acc(0);
        for (std::size_t q = 0; q < kin.size(); ++q) {
            const double k0 = kin[q];
            const double ei = 0.5 * k0 * k0 / m;
            const double mismatch = ef - ei;
            const cdouble mel = coupling_transform(model, lev, k - k0) *
                                std::exp(cdouble(0, -(k - k0) * a));
            // (1/i) * integral_0^T e^{i*mismatch*tau} dtau, via the energy window
            const cdouble time_factor =
                cdouble(0, -1.0) * 2.0 * pi * energy_window(mismatch, T) *
                std::exp(cdouble(0, 0.5 * mismatch * T));
            acc += mel * time_factor * win[q];
        }
        out_k[j] = acc * std::exp(cdouble(0, -ef * T));
    }

    // back to position space: psi(x_j) = (1/h) IDFT[psi(k) e^{i k origin}]
    for (std::size_t j = 0; j < n; ++j) out_k[j] *= std::exp(cdouble(0, ks[j] * grid.origin[0]));
    fft.inverse(out_k.data());

    const auto k_out = try_outgoing_wavenumber(model.incident.kinematic_wavenumber(1), m, omega);
    ScalarField field(grid, ChannelTag{lev == 0, site, level}, k_out ? *k_out : 0.0);
    for (std::size_t j = 0; j < n; ++j) field.amp[j] = out_k[j] / h;
    return field;
}

ScalarField delta_limit_prediction(const ModelConfig& model, const Grid& grid, int site,
                                   const MultiIndex& level) {
    check_1d(model, grid);
    if (model.incident.kind != IncidentWave::Kind::plane_wave)
        throw FiniteTimeError("delta_limit_prediction: plane-wave incident only");
    const double a = model.sites[static_cast<std::size_t>(site)][0];
    const int lev = level.total();
    const double m = model.particle_mass;
    const double k0 = model.incident.wavevector[0];
    const double k_out = outgoing_wavenumber(k0, m, model.frequency * lev);
    if (k_out <= 0) throw FiniteTimeError("delta_limit_prediction: channel at or below threshold");

    // source quadrature sub-grid over the coupling support
    const double ell = model.ell();
    const double radius = 12.0 * ell * std::sqrt(lev + 1.0) + 8.0 * model.potential_range;
    const double hq = std::min({grid.spacing, 1.0 / (8.0 * std::max(k0, k_out)), ell / 20.0});
    const int nq = static_cast<int>(std::ceil(2.0 * radius / hq)) + 1;

    std::vector<double> xs(nq), prof(nq);
    for (int i = 0; i < nq; ++i) {
        xs[i] = a - radius + hq * i;
        prof[i] = model.coupling * smeared_pair_element(lev, 0, xs[i] - a, ell, model.potential_range);
    }

    ScalarField field(grid, ChannelTag{lev == 0, site, level}, k_out);
    const cdouble green_pref = cdouble(0, -m / k_out);  // m/(i k_out)
    const std::size_t n = grid.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.origin[0] + grid.spacing * static_cast<double>(j);
        cdouble acc(0);
        for (int i = 0; i < nq; ++i) {
            const double w = (i == 0 || i == nq - 1) ? 0.5 : 1.0;  // trapezoid
            acc += w * std::exp(cdouble(0, k_out * std::abs(x - xs[i]))) * prof[i] *
                   std::exp(cdouble(0, k0 * xs[i]));
        }
        field.amp[j] = green_pref * acc * hq;
    }
    return field;
}

double windowed_relative_distance(const ScalarField& trial, const ScalarField& reference,
                                  double center, double radius) {
    if (!(trial.grid == reference.grid)) throw FiniteTimeError("windowed distance: grid mismatch");
    const Grid& g = trial.grid;
    cdouble overlap(0);
    double ref2 = 0;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.origin[0] + g.spacing * static_cast<double>(j);
        if (std::abs(x - center) > radius) continue;
        idx.push_back(j);
        overlap += std::conj(reference.amp[j]) * trial.amp[j];
        ref2 += std::norm(reference.amp[j]);
    }
    if (idx.empty() || ref2 == 0) throw FiniteTimeError("windowed distance: empty window");
    const double mag = std::abs(overlap);
    const cdouble phase = mag > 0 ? overlap / mag : cdouble(1, 0);
    double diff2 = 0;
    for (std::size_t j : idx) diff2 += std::norm(trial.amp[j] - phase * reference.amp[j]);
    return std::sqrt(diff2 / ref2);
}

}  // namespace oscatter
