#include "oscatter/experiment.hpp"

#include <cmath>
#include <thread>

#include "oscatter/form_factor.hpp"
#include "oscatter/kinematics.hpp"
#include "oscatter/sources.hpp"

namespace oscatter {

JumpWeightTable detector_response_table(const std::vector<cdouble>& amplitudes,
                                        const ModelConfig& detector, double k_eff) {
    if (amplitudes.size() != detector.sites.size())
        throw ExperimentError("detector_response_table: one amplitude per detector site required");
    const double ell = detector.ell();
    const double eta = 0.5 * k_eff * k_eff * ell * ell;
    const int cap = detector.level_cap;

    JumpWeightTable table;
    table.k_in = k_eff;
    table.fingerprint = fnv1a(amplitudes.data(), amplitudes.size() * sizeof(cdouble));

    bool any_open = false;
    for (std::size_t p = 0; p < amplitudes.size(); ++p) {
        const double a2 = std::norm(amplitudes[p]);
        for (int n = 1; n <= cap; ++n) {
            JumpEntry e;
            e.site = static_cast<int>(p);
            e.level = MultiIndex::axis(detector.dimension, 0, n);
            const double omega = detector.frequency * n;
            if (!try_outgoing_wavenumber(k_eff, detector.particle_mass, omega)) {
                e.closed = true;
            } else {
                any_open = true;
                e.weight = a2 * poisson_pmf(n, eta);
                e.source_norm = e.weight;
            }
            table.entries.push_back(e);
            table.inelastic_weight_total += e.weight;
            table.inelastic_source_norm += e.source_norm;
        }
        table.elastic_weight += a2 * poisson_pmf(0, eta);
    }
    if (!any_open)
        throw ExperimentError("detector cannot absorb one oscillator quantum at the incident energy");

    const double inelastic_mass = 1.0 - poisson_pmf(0, eta);
    table.tail_fraction = inelastic_mass > 0 ? form_factor_tail_mass(cap, eta) / inelastic_mass : 0.0;
    table.no_detection = table.inelastic_weight_total <= 0.0;
    if (!table.no_detection && table.tail_fraction > JumpWeightTable::tail_abort_fraction)
        throw ExperimentError("detector response truncation " + format_full(table.tail_fraction) +
                              " of the inelastic mass exceeds the allowed 1e-6; raise level_cap");
    return table;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.shots < 1) throw ExperimentError("run_experiment: need at least one shot");
    if (spec.detector.sites.size() != spec.plane.pixel_centers.size())
        throw ExperimentError("run_experiment: detector sites must be the plane's pixel centers");
    for (std::size_t p = 0; p < spec.plane.pixel_centers.size(); ++p)
        for (int j = 0; j < spec.detector.dimension; ++j)
            if (spec.detector.sites[p][j] != spec.plane.pixel_centers[p][j])
                throw ExperimentError("run_experiment: detector sites must be the plane's pixel centers");

    // stage 1: coherent elastic diffraction, shot-independent
    const Grid grid = Grid::covering(spec.diffractor, spec.grid_spacing, spec.grid_margin);
    const ScalarField psi = sample_incident(spec.diffractor, grid);
    const ScalarField source = elastic_source(psi, spec.diffractor);
    const std::vector<cdouble> amps = far_field(source, spec.plane);

    // stage 2: per-shot jump sampling on the detector array
    JumpWeightTable raw = detector_response_table(amps, spec.detector, source.k_out);
    const double eta = spec.inelastic_fraction ? *spec.inelastic_fraction
                                               : default_inelastic_fraction(raw);
    const ProbabilityTable table = normalize(raw, eta);

    const std::size_t nsites = spec.detector.sites.size();
    auto make_hist = [&]() {
        Histogram h;
        h.site_counts.assign(nsites, 0);
        h.site_positions.resize(nsites);
        for (std::size_t p = 0; p < nsites; ++p) h.site_positions[p] = spec.plane.pixel_centers[p][0];
        h.seed = spec.seed;
        h.config_hash = spec.config_hash;
        return h;
    };

    const int workers = std::max(1, spec.workers);
    std::vector<Histogram> parts(workers, make_hist());
    auto run_range = [&](int w, std::uint64_t begin, std::uint64_t end) {
        Histogram& h = parts[w];
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            RngStream stream(spec.seed, shot);
            const DetectionEvent ev = sample_jump(table, stream, spec.detector);
            if (ev.elastic)
                ++h.elastic_count;
            else
                ++h.site_counts[static_cast<std::size_t>(ev.site)];
            ++h.shots;
        }
    };

    if (workers == 1) {
        run_range(0, 0, spec.shots);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (spec.shots + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t b = std::min<std::uint64_t>(spec.shots, w * chunk);
            const std::uint64_t e = std::min<std::uint64_t>(spec.shots, (w + 1) * chunk);
            pool.emplace_back(run_range, w, b, e);
        }
        for (auto& t : pool) t.join();
    }

    Histogram hist = parts[0];
    for (int w = 1; w < workers; ++w) hist = merge(hist, parts[w]);
    hist.check_conservation();

    ExperimentResult res;
    res.histogram = std::move(hist);
    res.pixel_intensity.resize(amps.size());
    for (std::size_t p = 0; p < amps.size(); ++p) res.pixel_intensity[p] = std::norm(amps[p]);
    res.table = table;
    res.k_out = source.k_out;
    res.inelastic_fraction = eta;
    return res;
}

}  // namespace oscatter
