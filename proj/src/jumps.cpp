#include "oscatter/jumps.hpp"

#include <algorithm>
#include <cmath>

#include "oscatter/form_factor.hpp"
#include "oscatter/kinematics.hpp"
#include "oscatter/sources.hpp"

namespace oscatter {

namespace {

struct AxisWindow {
    int lo = 0, hi = -1;  // inclusive index range
};

AxisWindow axis_window(const Grid& g, int axis, double center, double radius) {
    AxisWindow w;
    w.lo = std::max(0, static_cast<int>(std::ceil((center - radius - g.origin[axis]) / g.spacing)));
    w.hi = std::min(g.npts[axis] - 1,
                    static_cast<int>(std::floor((center + radius - g.origin[axis]) / g.spacing)));
    return w;
}

}  // namespace

double ProbabilityTable::total() const {
    double s = elastic_prob;
    for (const auto& e : outcomes) s += e.weight;
    return s;
}

JumpWeightTable jump_weights(const ScalarField& psi_in, const ModelConfig& model) {
    if (psi_in.grid.dim != model.dimension) throw JumpError("jump_weights: dimension mismatch");
    if (!psi_in.grid.covers_sites(model, 6.0 * model.ell()))
        throw JumpError("jump_weights: grid does not cover all sites with a 6 ell margin");
    const double n2 = psi_in.norm_squared();
    if (std::abs(n2 - 1.0) > 1e-6)
        throw JumpError("jump_weights: incident field is not normalized on its grid");

    const auto basis = model.basis();
    const double k_in = psi_in.k_out;
    const double ell = model.ell();
    const double radius = locality_radius(model);
    const double measure = psi_in.grid.cell_volume();
    const int cap = model.level_cap;
    const int dim = model.dimension;

    auto levels = enumerate_levels(dim, cap);
    levels.erase(levels.begin());  // drop the elastic zero index

    JumpWeightTable table;
    table.k_in = k_in;
    table.fingerprint = psi_in.fingerprint();

    const Grid& g = psi_in.grid;
    std::vector<double> axis_pair[3];  // per-axis phi_m phi_0 / ell at a point
    for (int j = 0; j < dim; ++j) axis_pair[j].resize(cap + 1);
    std::vector<double> hall(cap + 1);

    for (std::size_t site = 0; site < model.sites.size(); ++site) {
        const auto& a = model.sites[site];
        std::vector<cdouble> amp(levels.size(), cdouble(0));
        std::vector<double> src(levels.size(), 0.0);

        AxisWindow w[3];
        bool empty = false;
        for (int j = 0; j < dim; ++j) {
            w[j] = axis_window(g, j, a[j], radius);
            if (w[j].lo > w[j].hi) empty = true;
        }
        if (!empty) {
            // iterate the window; per point evaluate all per-axis pair factors
            // once and combine per level
            std::array<int, 3> idx{w[0].lo, dim >= 2 ? w[1].lo : 0, dim >= 3 ? w[2].lo : 0};
            while (true) {
                std::array<double, 3> x{0, 0, 0};
                std::size_t flat = 0;
                for (int j = 0; j < dim; ++j) {
                    x[j] = g.origin[j] + g.spacing * idx[j];
                    flat = flat * static_cast<std::size_t>(g.npts[j]) + static_cast<std::size_t>(idx[j]);
                }
                for (int j = 0; j < dim; ++j) {
                    const double xi = (x[j] - a[j]) / ell;
                    hermite_function_all(cap, xi, hall.data());
                    const double base = hall[0] / ell;
                    for (int m = 0; m <= cap; ++m) axis_pair[j][m] = hall[m] * base;
                }
                const cdouble psi = psi_in.amp[flat] * measure;
                const double psi2 = std::norm(psi_in.amp[flat]) * measure;
                for (std::size_t li = 0; li < levels.size(); ++li) {
                    double pd = axis_pair[0][levels[li][0]];
                    if (dim >= 2) pd *= axis_pair[1][levels[li][1]];
                    if (dim >= 3) pd *= axis_pair[2][levels[li][2]];
                    amp[li] += pd * psi;
                    src[li] += pd * pd * psi2;
                }
                int j = dim - 1;
                for (; j >= 0; --j) {
                    if (++idx[j] <= w[j].hi) break;
                    idx[j] = w[j].lo;
                }
                if (j < 0) break;
            }
        }

        for (std::size_t li = 0; li < levels.size(); ++li) {
            JumpEntry e;
            e.site = static_cast<int>(site);
            e.level = levels[li];
            const double omega = basis.transition_frequency(levels[li]);
            if (!try_outgoing_wavenumber(k_in, model.particle_mass, omega)) {
                e.closed = true;
                e.weight = 0.0;
                e.source_norm = 0.0;
            } else {
                e.weight = std::norm(amp[li]);
                e.source_norm = src[li];
            }
            table.entries.push_back(e);
            table.inelastic_weight_total += e.weight;
            table.inelastic_source_norm += e.source_norm;
        }
    }

    // coherent elastic cutout norm (full-grid pass; ground-state pieces only)
    {
        const MultiIndex zero = MultiIndex::zero(dim);
        const std::size_t npt = g.size();
        double norm = 0;
        for (std::size_t i = 0; i < npt; ++i) {
            const auto x = g.point(i);
            double dens = 0;
            for (const auto& a : model.sites) {
                bool near = true;
                for (int j = 0; j < dim; ++j)
                    if (std::abs(x[j] - a[j]) > radius) near = false;
                if (near) dens += basis.pair_density(zero, x, a);
            }
            if (dens != 0.0) norm += dens * dens * std::norm(psi_in.amp[i]);
        }
        table.elastic_weight = norm * measure;
    }

    table.no_detection = table.inelastic_weight_total <= 0.0;

    // truncation estimate from the plane-wave Poisson bound at the kinematic
    // wavenumber; field-amplitude factors cancel in the ratio
    const double eta = 0.5 * k_in * k_in * ell * ell;
    const double inelastic_mass = 1.0 - poisson_pmf(0, eta);
    table.tail_fraction = inelastic_mass > 0 ? form_factor_tail_mass(cap, eta) / inelastic_mass : 0.0;
    if (!table.no_detection && table.tail_fraction > JumpWeightTable::tail_abort_fraction)
        throw JumpError("jump_weights: truncated level mass " + format_full(table.tail_fraction) +
                        " of the inelastic mass exceeds the allowed 1e-6; raise level_cap");
    return table;
}

double default_inelastic_fraction(const JumpWeightTable& table) {
    const double total = table.elastic_weight + table.inelastic_source_norm;
    return total > 0 ? table.inelastic_source_norm / total : 0.0;
}

ProbabilityTable normalize(const JumpWeightTable& table, double eta_inelastic) {
    if (eta_inelastic < 0.0 || eta_inelastic > 1.0)
        throw JumpError("normalize: inelastic fraction must lie in [0, 1]");
    if (table.elastic_weight <= 0.0 && table.inelastic_weight_total <= 0.0)
        throw JumpError("normalize: all-zero weight table");

    ProbabilityTable p;
    p.fingerprint = table.fingerprint;
    if (table.inelastic_weight_total <= 0.0 || eta_inelastic == 0.0) {
        p.elastic_prob = 1.0;
        p.inelastic_fraction = 0.0;
        return p;
    }
    p.inelastic_fraction = eta_inelastic;
    p.elastic_prob = 1.0 - eta_inelastic;
    double cum = 0;
    for (const auto& e : table.entries) {
        if (e.weight <= 0.0) continue;
        JumpEntry out = e;
        out.weight = eta_inelastic * e.weight / table.inelastic_weight_total;
        cum += out.weight;
        p.outcomes.push_back(out);
        p.cumulative.push_back(cum);
    }
    return p;
}

DetectionEvent sample_jump(const ProbabilityTable& table, RngStream& stream, const ModelConfig& model) {
    if (std::abs(table.total() - 1.0) > 1e-9)
        throw JumpError("sample_jump: table is not normalized");
    DetectionEvent ev;
    ev.seed = stream.seed();
    ev.stream_index = stream.stream_index();

    const double u = stream.uniform();
    if (u < table.elastic_prob || table.outcomes.empty()) {
        ev.elastic = true;
        return ev;
    }
    const double v = u - table.elastic_prob;
    auto it = std::lower_bound(table.cumulative.begin(), table.cumulative.end(), v);
    std::size_t idx = static_cast<std::size_t>(it - table.cumulative.begin());
    if (idx >= table.outcomes.size()) idx = table.outcomes.size() - 1;

    const JumpEntry& out = table.outcomes[idx];
    ev.elastic = false;
    ev.site = out.site;
    ev.level = out.level;
    ev.deposited_energy = model.frequency * out.level.total();
    ev.site_position = model.sites[static_cast<std::size_t>(out.site)];
    return ev;
}

std::pair<int, MultiIndex> argmax_jump(const JumpWeightTable& table) {
    const JumpEntry* best = nullptr;
    for (const auto& e : table.entries) {
        if (e.weight <= 0.0) continue;
        if (!best || e.weight > best->weight ||
            (e.weight == best->weight &&
             (e.site < best->site || (e.site == best->site && e.level < best->level))))
            best = &e;
    }
    if (!best) throw JumpError("argmax_jump: all inelastic weights are zero");
    return {best->site, best->level};
}

std::string event_log_header() {
    return "shot,outcome,site,level_total,deposited_energy,stream_index";
}

std::string event_log_line(std::uint64_t shot, const DetectionEvent& ev) {
    std::string line = std::to_string(shot) + ",";
    if (ev.elastic) {
        line += "elastic,-1,0,0,";
    } else {
        line += "jump," + std::to_string(ev.site) + "," + std::to_string(ev.level.total()) + "," +
                format_full(ev.deposited_energy) + ",";
    }
    line += std::to_string(ev.stream_index);
    return line;
}

}  // namespace oscatter
