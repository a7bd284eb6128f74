#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oscatter/math_util.hpp"
#include "oscatter/model.hpp"
#include "oscatter/multi_index.hpp"

namespace oscatter {

struct GridError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform d-dimensional sampling box with isotropic spacing.
struct Grid {
    int dim = 1;
    std::array<double, 3> origin{0, 0, 0};
    double spacing = 0;
    std::array<int, 3> npts{1, 1, 1};

    Grid() = default;
    Grid(int d, std::array<double, 3> orig, double h, std::array<int, 3> n);

    // Box covering all sites of a model with the given margin (>= 6 ell).
    static Grid covering(const ModelConfig& model, double spacing, double margin_ell = 8.0);

    std::size_t size() const {
        std::size_t s = 1;
        for (int j = 0; j < dim; ++j) s *= static_cast<std::size_t>(npts[j]);
        return s;
    }
    double cell_volume() const {
        double v = 1;
        for (int j = 0; j < dim; ++j) v *= spacing;
        return v;
    }
    std::array<double, 3> point(std::size_t flat) const {
        std::array<double, 3> x{0, 0, 0};
        for (int j = dim - 1; j >= 0; --j) {
            const auto n = static_cast<std::size_t>(npts[j]);
            x[j] = origin[j] + spacing * static_cast<double>(flat % n);
            flat /= n;
        }
        return x;
    }
    bool covers_sites(const ModelConfig& model, double margin) const;
    bool operator==(const Grid& o) const {
        return dim == o.dim && origin == o.origin && spacing == o.spacing && npts == o.npts;
    }
};

// Channel label carried by scattered fields.
struct ChannelTag {
    bool elastic = true;
    int site = -1;       // inelastic only
    MultiIndex level;    // inelastic only (nonzero)
    std::string str() const {
        return elastic ? std::string("elastic") : ("site " + std::to_string(site) + " n=" + level.str());
    }
};

// Complex amplitude per grid point, tagged with its scattering channel and
// outgoing wavenumber.
struct ScalarField {
    Grid grid;
    std::vector<cdouble> amp;
    ChannelTag tag;
    double k_out = 0;

    ScalarField() = default;
    ScalarField(Grid g, ChannelTag t, double k) : grid(g), amp(g.size(), cdouble(0)), tag(t), k_out(k) {}

    double norm_squared() const {
        double s = 0;
        for (const auto& a : amp) s += std::norm(a);
        return s * grid.cell_volume();
    }
    void check_finite() const;
    std::uint64_t fingerprint() const {
        return fnv1a(amp.data(), amp.size() * sizeof(cdouble));
    }
};

// Samples the configured incident wave on a grid. Plane waves get unit
// amplitude unless normalize is set, in which case the grid L2 norm is 1.
ScalarField sample_incident(const ModelConfig& model, const Grid& grid);

}  // namespace oscatter
