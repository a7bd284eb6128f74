#include "oscatter/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "oscatter/coupling.hpp"
#include "oscatter/fft.hpp"
#include "oscatter/linalg.hpp"

namespace oscatter {

double CoupledState::norm_squared() const {
    double s = 0;
    for (const auto& ch : amps)
        for (const auto& a : ch) s += std::norm(a);
    return s * grid.cell_volume();
}

std::vector<double> CoupledState::channel_probabilities() const {
    std::vector<double> p(channels.size(), 0.0);
    for (std::size_t c = 0; c < channels.size(); ++c) {
        double s = 0;
        for (const auto& a : amps[c]) s += std::norm(a);
        p[c] = s * grid.cell_volume();
    }
    return p;
}

namespace {

std::vector<OracleChannel> enumerate_channels(std::size_t nsites, int cap) {
    std::vector<OracleChannel> out;
    std::vector<int> levels(nsites, 0);
    while (true) {
        out.push_back({levels});
        std::size_t j = nsites;
        while (j > 0) {
            --j;
            if (++levels[j] <= cap) break;
            levels[j] = 0;
            if (j == 0) return out;
        }
        if (j == 0 && levels[0] == 0) return out;
    }
}

// per-point coupling matrix eigensystems on the (sparse) support of V
struct CouplingTable {
    std::vector<std::size_t> points;
    std::vector<std::vector<double>> eigvals;  // [point][channel]
    std::vector<std::vector<double>> eigvecs;  // [point][row*nc+col]
};

CouplingTable build_coupling(const ModelConfig& model, const Grid& grid,
                             const std::vector<OracleChannel>& channels) {
    const int nc = static_cast<int>(channels.size());
    const std::size_t nsites = model.sites.size();
    const double ell = model.ell();
    const double sigma = model.potential_range;

    int max_level = 0;
    for (const auto& ch : channels)
        for (int n : ch.site_levels) max_level = std::max(max_level, n);

    // 1D pairwise elements K_{nm}(u) per site, cached per grid point
    CouplingTable table;
    const std::size_t npt = grid.size();
    const double support = 1.5 * (12.0 * ell * std::sqrt(max_level + 1.0) + 6.0 * sigma);

    std::vector<double> mat(static_cast<std::size_t>(nc) * nc);
    std::vector<std::vector<double>> pair_elems(nsites);
    for (std::size_t i = 0; i < npt; ++i) {
        const double x = grid.origin[0] + grid.spacing * static_cast<double>(i);
        bool near = false;
        for (const auto& a : model.sites)
            if (std::abs(x - a[0]) <= support) near = true;
        if (!near) continue;

        for (std::size_t s = 0; s < nsites; ++s) {
            auto& pe = pair_elems[s];
            pe.assign(static_cast<std::size_t>(max_level + 1) * (max_level + 1), 0.0);
            const double u = x - model.sites[s][0];
            for (int n = 0; n <= max_level; ++n)
                for (int m = n; m <= max_level; ++m) {
                    const double v = smeared_pair_element(n, m, u, ell, sigma);
                    pe[static_cast<std::size_t>(n) * (max_level + 1) + m] = v;
                    pe[static_cast<std::size_t>(m) * (max_level + 1) + n] = v;
                }
        }

        std::fill(mat.begin(), mat.end(), 0.0);
        for (int c1 = 0; c1 < nc; ++c1)
            for (int c2 = c1; c2 < nc; ++c2) {
                double v = 0;
                // V couples channels differing at exactly one site
                int ndiff = 0, diff_site = -1;
                for (std::size_t s = 0; s < nsites; ++s)
                    if (channels[c1].site_levels[s] != channels[c2].site_levels[s]) {
                        ++ndiff;
                        diff_site = static_cast<int>(s);
                    }
                if (ndiff == 0) {
                    for (std::size_t s = 0; s < nsites; ++s) {
                        const int n = channels[c1].site_levels[s];
                        v += pair_elems[s][static_cast<std::size_t>(n) * (max_level + 1) + n];
                    }
                } else if (ndiff == 1) {
                    const int n = channels[c1].site_levels[diff_site];
                    const int m = channels[c2].site_levels[diff_site];
                    v = pair_elems[diff_site][static_cast<std::size_t>(n) * (max_level + 1) + m];
                }
                mat[static_cast<std::size_t>(c1) * nc + c2] = model.coupling * v;
                mat[static_cast<std::size_t>(c2) * nc + c1] = model.coupling * v;
            }

        double frob = 0;
        for (double v : mat) frob += v * v;
        if (frob < 1e-60) continue;

        SymmetricEigen eig = jacobi_eigen(mat, nc);
        table.points.push_back(i);
        table.eigvals.push_back(eig.values);
        table.eigvecs.push_back(eig.vectors);
    }
    return table;
}

void apply_potential(CoupledState& st, const CouplingTable& table, double dt) {
    const int nc = static_cast<int>(st.channels.size());
    std::vector<cdouble> v(nc), w(nc);
    for (std::size_t t = 0; t < table.points.size(); ++t) {
        const std::size_t i = table.points[t];
        const auto& vals = table.eigvals[t];
        const auto& vecs = table.eigvecs[t];
        for (int c = 0; c < nc; ++c) v[c] = st.amps[c][i];
        // w = U^T v ; w *= exp(-i dt lambda) ; v = U w
        for (int k = 0; k < nc; ++k) {
            cdouble s(0);
            for (int r = 0; r < nc; ++r) s += vecs[static_cast<std::size_t>(r) * nc + k] * v[r];
            w[k] = s * std::exp(cdouble(0, -dt * vals[k]));
        }
        for (int r = 0; r < nc; ++r) {
            cdouble s(0);
            for (int k = 0; k < nc; ++k) s += vecs[static_cast<std::size_t>(r) * nc + k] * w[k];
            st.amps[r][i] = s;
        }
    }
}

}  // namespace

CoupledState initial_state(const ModelConfig& model, const Grid& grid, int per_site_level_cap) {
    if (model.dimension != 1) throw OracleError("oracle runs in one dimension");
    if (grid.dim != 1) throw OracleError("oracle grid must be one-dimensional");
    if (model.incident.kind != IncidentWave::Kind::gaussian_packet)
        throw OracleError("oracle needs a normalizable gaussian packet");
    if (per_site_level_cap < 1 || per_site_level_cap > model.level_cap)
        throw OracleError("oracle per-site level cap out of range");

    CoupledState st;
    st.grid = grid;
    st.channels = enumerate_channels(model.sites.size(), per_site_level_cap);
    st.amps.assign(st.channels.size(), std::vector<cdouble>(grid.size(), cdouble(0)));

    ScalarField packet = sample_incident(model, grid);
    const double n2 = packet.norm_squared();
    const double scale = 1.0 / std::sqrt(n2);
    for (std::size_t i = 0; i < grid.size(); ++i) st.amps[0][i] = packet.amp[i] * scale;
    return st;
}

EvolveDiagnostics evolve(CoupledState& st, const ModelConfig& model, const EvolveOptions& opt) {
    const double dt = opt.time_step;
    if (dt <= 0 || opt.total_time <= 0) throw OracleError("evolve: time step and total time must be positive");
    const double h = st.grid.spacing;
    const double dt_max = 0.02 * std::min(1.0 / model.frequency,
                                          model.particle_mass * h * h / (pi * pi));
    if (dt > dt_max)
        throw OracleError("evolve: time step " + format_full(dt) + " exceeds the resolution bound " +
                          format_full(dt_max));

    const std::size_t n = st.grid.size();
    const int nc = static_cast<int>(st.channels.size());
    Fft fft(n);
    const auto ks = Fft::frequencies(n, h);

    // kinetic + channel-energy phases for half and full steps
    std::vector<cdouble> half_phase(static_cast<std::size_t>(nc) * n), full_phase(half_phase.size());
    for (int c = 0; c < nc; ++c) {
        const double e_ch = model.frequency * st.channels[c].total();
        for (std::size_t j = 0; j < n; ++j) {
            const double e = 0.5 * ks[j] * ks[j] / model.particle_mass + e_ch;
            half_phase[static_cast<std::size_t>(c) * n + j] = std::exp(cdouble(0, -0.5 * dt * e));
            full_phase[static_cast<std::size_t>(c) * n + j] = std::exp(cdouble(0, -dt * e));
        }
    }

    CouplingTable coupling = build_coupling(model, st.grid, st.channels);

    std::vector<double> mask;
    if (opt.absorber) {
        if (opt.absorber_width <= 0) throw OracleError("evolve: absorber width must be positive");
        // per-step factor exp(-dt * Gamma(x)); Gamma ramps as sin^2 so the
        // rate stays adiabatic at the inner edge and peaks at the boundary
        mask.assign(n, 1.0);
        const int ramp = std::max(1, static_cast<int>(opt.absorber_width / h));
        for (int j = 0; j < ramp && j < static_cast<int>(n); ++j) {
            const double depth = 1.0 - static_cast<double>(j) / ramp;
            const double s = std::sin(0.5 * pi * depth);
            const double factor = std::exp(-dt * opt.absorber_strength * s * s);
            mask[j] = std::min(mask[j], factor);
            mask[n - 1 - j] = std::min(mask[n - 1 - j], factor);
        }
    }

    const int steps = static_cast<int>(std::ceil(opt.total_time / dt - 1e-9));
    EvolveDiagnostics diag;
    diag.steps = steps;

    auto kinetic = [&](const std::vector<cdouble>& phase) {
        for (int c = 0; c < nc; ++c) {
            fft.forward(st.amps[c].data());
            const cdouble* ph = &phase[static_cast<std::size_t>(c) * n];
            for (std::size_t j = 0; j < n; ++j) st.amps[c][j] *= ph[j];
            fft.inverse(st.amps[c].data());
        }
    };

    kinetic(half_phase);
    for (int step = 0; step < steps; ++step) {
        apply_potential(st, coupling, dt);
        kinetic(step + 1 < steps ? full_phase : half_phase);

        // boundary monitor before any masking
        double edge = 0;
        for (int c = 0; c < nc; ++c)
            edge += std::norm(st.amps[c].front()) + std::norm(st.amps[c].back());
        diag.boundary_monitor = std::max(diag.boundary_monitor, edge * h);

        if (!mask.empty()) {
            double removed = 0;
            for (int c = 0; c < nc; ++c)
                for (std::size_t j = 0; j < n; ++j) {
                    const double before = std::norm(st.amps[c][j]);
                    st.amps[c][j] *= mask[j];
                    removed += before - std::norm(st.amps[c][j]);
                }
            st.absorbed += removed * h;
        }

        if ((step + 1) % opt.norm_check_interval == 0 || step + 1 == steps) {
            const double drift = std::abs(st.norm_squared() + st.absorbed - 1.0);
            diag.norm_drift = std::max(diag.norm_drift, drift);
            if (drift > 1e-8)
                throw OracleError("evolve: norm drift " + format_full(drift) + " beyond 1e-8");
        }
    }
    st.time += steps * dt;

    // truncation sentinel: population stuck in any channel at the cap
    int cap = 0;
    for (const auto& ch : st.channels)
        for (int l : ch.site_levels) cap = std::max(cap, l);
    const auto probs = st.channel_probabilities();
    for (std::size_t c = 0; c < st.channels.size(); ++c) {
        bool at_cap = false;
        for (int l : st.channels[c].site_levels)
            if (l == cap) at_cap = true;
        if (at_cap) diag.leakage = std::max(diag.leakage, probs[c]);
    }
    if (diag.leakage > 1e-6)
        throw OracleError("evolve: channel leakage " + format_full(diag.leakage) +
                          " into the level cap exceeds 1e-6");
    diag.absorbed = st.absorbed;
    return diag;
}

std::vector<double> first_order_prediction(const ModelConfig& model, const Grid& grid, double total_time,
                                           int time_points, int level_cap) {
    if (model.dimension != 1 || grid.dim != 1) throw OracleError("first_order_prediction: 1D only");
    if (model.sites.size() != 1) throw OracleError("first_order_prediction: single site only");
    if (time_points < 2 || time_points % 2 != 0)
        throw OracleError("first_order_prediction: need an even number of Simpson intervals");

    const std::size_t n = grid.size();
    const double h = grid.spacing;
    Fft fft(n);
    const auto ks = Fft::frequencies(n, h);

    ScalarField packet = sample_incident(model, grid);
    const double scale = 1.0 / std::sqrt(packet.norm_squared());
    std::vector<cdouble> psi0_k(packet.amp);
    for (auto& a : psi0_k) a *= scale;
    fft.forward(psi0_k.data());

    // coupling profiles g*K_{n0}(x - a)
    const double ell = model.ell();
    std::vector<std::vector<double>> profile(level_cap + 1);
    for (int lev = 1; lev <= level_cap; ++lev) {
        profile[lev].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = grid.origin[0] + h * static_cast<double>(j);
            profile[lev][j] = model.coupling *
                              smeared_pair_element(lev, 0, x - model.sites[0][0], ell, model.potential_range);
        }
    }

    const double dtau = total_time / time_points;
    std::vector<std::vector<cdouble>> acc(level_cap + 1, std::vector<cdouble>(n, cdouble(0)));
    std::vector<cdouble> psi_tau(n), work(n);

    for (int j = 0; j <= time_points; ++j) {
        const double tau = dtau * j;
        const double w = (j == 0 || j == time_points) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);

        for (std::size_t q = 0; q < n; ++q)
            psi_tau[q] = psi0_k[q] * std::exp(cdouble(0, -0.5 * tau * ks[q] * ks[q] / model.particle_mass));
        fft.inverse(psi_tau.data());

        for (int lev = 1; lev <= level_cap; ++lev) {
            for (std::size_t q = 0; q < n; ++q) work[q] = profile[lev][q] * psi_tau[q];
            fft.forward(work.data());
            for (std::size_t q = 0; q < n; ++q) {
                const double ef = 0.5 * ks[q] * ks[q] / model.particle_mass + model.frequency * lev;
                // exp(-i (T - tau) E_f) folded as exp(+i tau E_f); the common
                // exp(-i T E_f) phase cannot change any probability
                acc[lev][q] += (w * dtau / 3.0) * work[q] * std::exp(cdouble(0, tau * ef));
            }
        }
    }

    std::vector<double> probs(level_cap + 1, 0.0);
    for (int lev = 1; lev <= level_cap; ++lev) {
        double s = 0;
        for (const auto& a : acc[lev]) s += std::norm(a);
        probs[lev] = s * h / static_cast<double>(n);  // Parseval for the unnormalized DFT
    }
    return probs;
}

}  // namespace oscatter
