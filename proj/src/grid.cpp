#include "oscatter/grid.hpp"

#include <cmath>

namespace oscatter {

Grid::Grid(int d, std::array<double, 3> orig, double h, std::array<int, 3> n)
    : dim(d), origin(orig), spacing(h), npts(n) {
    if (d < 1 || d > 3) throw GridError("grid dimension must be 1..3");
    if (h <= 0) throw GridError("grid spacing must be positive");
    for (int j = 0; j < d; ++j)
        if (npts[j] < 16) throw GridError("grid needs at least 16 points per axis");
    for (int j = d; j < 3; ++j) npts[j] = 1;
}

Grid Grid::covering(const ModelConfig& model, double spacing, double margin_ell) {
    if (margin_ell < 6.0) throw GridError("grid margin must be at least 6 ell");
    const double margin = margin_ell * model.ell();
    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int j = 0; j < model.dimension; ++j) {
        lo[j] = model.sites.front()[j];
        hi[j] = model.sites.front()[j];
    }
    for (const auto& s : model.sites)
        for (int j = 0; j < model.dimension; ++j) {
            lo[j] = std::min(lo[j], s[j]);
            hi[j] = std::max(hi[j], s[j]);
        }
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> orig{0, 0, 0};
    for (int j = 0; j < model.dimension; ++j) {
        orig[j] = lo[j] - margin;
        n[j] = std::max(16, static_cast<int>(std::ceil((hi[j] - lo[j] + 2.0 * margin) / spacing)) + 1);
    }
    return Grid(model.dimension, orig, spacing, n);
}

bool Grid::covers_sites(const ModelConfig& model, double margin) const {
    for (const auto& s : model.sites)
        for (int j = 0; j < model.dimension; ++j) {
            const double lo = origin[j], hi = origin[j] + spacing * (npts[j] - 1);
            if (s[j] - margin < lo || s[j] + margin > hi) return false;
        }
    return true;
}

void ScalarField::check_finite() const {
    for (const auto& a : amp)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw GridError("field contains non-finite values");
}

ScalarField sample_incident(const ModelConfig& model, const Grid& grid) {
    if (grid.dim != model.dimension) throw GridError("grid/model dimension mismatch");
    const IncidentWave& w = model.incident;
    ScalarField f(grid, ChannelTag{}, w.kinematic_wavenumber(model.dimension));

    const std::size_t npt = grid.size();
    for (std::size_t i = 0; i < npt; ++i) {
        const auto x = grid.point(i);
        double phase = 0, gauss = 0;
        for (int j = 0; j < grid.dim; ++j) phase += w.wavevector[j] * x[j];
        if (w.kind == IncidentWave::Kind::gaussian_packet) {
            for (int j = 0; j < grid.dim; ++j) {
                const double d = x[j] - w.center[j];
                gauss += d * d;
            }
            gauss /= 4.0 * w.width * w.width;
        }
        f.amp[i] = std::exp(cdouble(-gauss, phase));
    }
    if (w.normalize) {
        const double n2 = f.norm_squared();
        if (n2 <= 0) throw GridError("incident wave has zero norm on the grid");
        const double scale = 1.0 / std::sqrt(n2);
        for (auto& a : f.amp) a *= scale;
    }
    return f;
}

}  // namespace oscatter
