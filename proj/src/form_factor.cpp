#include "oscatter/form_factor.hpp"

#include <cmath>

namespace oscatter {

cdouble plane_wave_form_factor(const MultiIndex& n, const std::array<double, 3>& q, double ell) {
    cdouble val(1.0, 0.0);
    for (int j = 0; j < n.dim; ++j) {
        const double u = q[j] * ell;
        cdouble axis(std::exp(-0.25 * u * u), 0.0);
        const cdouble step = cdouble(0.0, u / std::sqrt(2.0));
        for (int k = 1; k <= n[j]; ++k) axis *= step / std::sqrt(static_cast<double>(k));
        val *= axis;
    }
    return val;
}

}  // namespace oscatter
