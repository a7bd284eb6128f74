#include "oscatter/math_util.hpp"

#include <cstdio>
#include <cstring>

namespace oscatter {

double poisson_pmf(int n, double eta) {
    if (n < 0) return 0.0;
    if (eta == 0.0) return n == 0 ? 1.0 : 0.0;
    double log_p = -eta + n * std::log(eta) - std::lgamma(n + 1.0);
    return std::exp(log_p);
}

double poisson_sf(int n, double eta) {
    if (n < 0) return 1.0;
    // sum pmf terms from the tail side: P(X > n) = sum_{j>n} pmf(j)
    // terms decay once j > eta; stop when the remainder bound is negligible.
    double sum = 0.0, comp = 0.0;
    double term = poisson_pmf(n + 1, eta);
    int j = n + 1;
    while (true) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        ++j;
        term *= eta / j;
        if (j > eta && term < 1e-300) break;
        if (j > eta + 40.0 * std::sqrt(eta + 1.0) + 60.0) break;
    }
    return sum;
}

std::uint64_t fnv1a(const void* data, std::size_t nbytes, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < nbytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
    return fnv1a(s.data(), s.size(), seed);
}

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace oscatter
