#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

namespace oscatter {

inline constexpr double pi = 3.14159265358979323846;
using cdouble = std::complex<double>;

// Poisson pmf e^{-eta} eta^n / n!, evaluated without factorial overflow.
double poisson_pmf(int n, double eta);

// Survival function P(X > n) for X ~ Poisson(eta). Direct compensated
// summation; adequate for eta <= ~60 which covers every preset.
double poisson_sf(int n, double eta);

// FNV-1a 64-bit, used for config hashes and field fingerprints.
std::uint64_t fnv1a(const void* data, std::size_t nbytes, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ull);

// Full-precision decimal formatting so regression diffs are meaningful.
std::string format_full(double x);

}  // namespace oscatter
