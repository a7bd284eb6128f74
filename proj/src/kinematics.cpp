#include "oscatter/kinematics.hpp"

namespace oscatter {

double energy_window_half_width(double T) {
    if (T <= 0) throw KinematicsError("energy_window_half_width: time window must be positive");
    // solve sin(u)/u = 1/2 on (0, pi) with u = eps*T/2, then eps* = 2u*/T
    double lo = 1e-12, hi = pi - 1e-12;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::sin(mid) / mid > 0.5 ? lo : hi) = mid;
    }
    return (lo + hi) / T;
}

}  // namespace oscatter
