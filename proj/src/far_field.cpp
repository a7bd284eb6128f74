#include "oscatter/far_field.hpp"

#include <cmath>

namespace oscatter {

void DetectorPlane::validate() const {
    if (distance <= 0) throw FarFieldError("detector plane distance must be positive");
    if (pixel_centers.empty()) throw FarFieldError("detector plane has no pixels");
    if (pixel_width <= 0) throw FarFieldError("pixel width must be positive");
    for (std::size_t i = 0; i < pixel_centers.size(); ++i)
        for (std::size_t j = i + 1; j < pixel_centers.size(); ++j) {
            double d2 = 0;
            for (int a = 0; a < dim; ++a) {
                const double d = pixel_centers[i][a] - pixel_centers[j][a];
                d2 += d * d;
            }
            if (std::sqrt(d2) < pixel_width * (1.0 - 1e-12))
                throw FarFieldError("detector pixels overlap");
        }
}

std::array<double, 3> DetectorPlane::pixel_q(std::size_t p, double k_out) const {
    const auto& r = pixel_centers[p];
    double r2 = 0;
    for (int a = 0; a < dim; ++a) r2 += r[a] * r[a];
    const double scale = k_out / std::sqrt(r2 + distance * distance);
    std::array<double, 3> q{0, 0, 0};
    for (int a = 0; a < dim; ++a) q[a] = scale * r[a];
    return q;
}

std::vector<cdouble> far_field_q(const ScalarField& source, const std::vector<std::array<double, 3>>& qs) {
    const Grid& g = source.grid;
    const std::size_t npt = g.size();
    const double measure = g.cell_volume();
    std::vector<cdouble> out(qs.size(), cdouble(0));

    for (std::size_t p = 0; p < qs.size(); ++p) {
        cdouble acc(0);
        for (std::size_t i = 0; i < npt; ++i) {
            const auto x = g.point(i);
            double phase = 0;
            for (int a = 0; a < g.dim; ++a) phase += qs[p][a] * x[a];
            acc += source.amp[i] * std::exp(cdouble(0, -phase));
        }
        out[p] = acc * measure;
    }
    return out;
}

std::vector<cdouble> far_field(const ScalarField& source, const DetectorPlane& plane) {
    plane.validate();
    if (plane.dim != source.grid.dim) throw FarFieldError("plane/source dimension mismatch");
    const double diam = support_diameter(source);
    if (plane.distance < 100.0 * diam)
        throw FarFieldError("detector plane too close for the Fraunhofer regime");

    std::vector<std::array<double, 3>> qs(plane.pixel_centers.size());
    for (std::size_t p = 0; p < qs.size(); ++p) qs[p] = plane.pixel_q(p, source.k_out);
    return far_field_q(source, qs);
}

double support_diameter(const ScalarField& field, double rel_threshold) {
    const Grid& g = field.grid;
    double max_amp = 0;
    for (const auto& a : field.amp) max_amp = std::max(max_amp, std::abs(a));
    if (max_amp == 0) return 0;
    const double thr = rel_threshold * max_amp;

    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
    bool any = false;
    const std::size_t npt = g.size();
    for (std::size_t i = 0; i < npt; ++i) {
        if (std::abs(field.amp[i]) < thr) continue;
        const auto x = g.point(i);
        if (!any) {
            lo = hi = x;
            any = true;
        } else {
            for (int a = 0; a < g.dim; ++a) {
                lo[a] = std::min(lo[a], x[a]);
                hi[a] = std::max(hi[a], x[a]);
            }
        }
    }
    double d2 = 0;
    for (int a = 0; a < g.dim; ++a) d2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    return std::sqrt(d2);
}

}  // namespace oscatter
