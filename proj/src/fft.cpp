#include "oscatter/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace oscatter {

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft: size must be a power of two");
    bitrev_.resize(n);
    bitrev_[0] = 0;
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 1; i < n; ++i) bitrev_[i] = (bitrev_[i >> 1] >> 1) | ((i & 1) << (bits - 1));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * pi / static_cast<double>(len);
        for (std::size_t k = 0; k < len / 2; ++k)
            twiddle_.push_back(cdouble(std::cos(ang * k), std::sin(ang * k)));
    }
}

void Fft::transform(cdouble* a, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);

    std::size_t tw_base = 0;
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n_; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cdouble w = twiddle_[tw_base + k];
                if (inv) w = std::conj(w);
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
        tw_base += half;
    }
    if (inv) {
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) a[i] *= scale;
    }
}

void Fft::forward(cdouble* data) const { transform(data, false); }
void Fft::inverse(cdouble* data) const { transform(data, true); }

std::vector<double> Fft::frequencies(std::size_t n, double h) {
    std::vector<double> k(n);
    const double dk = 2.0 * pi / (static_cast<double>(n) * h);
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<long long>(j);
        const auto sn = static_cast<long long>(n);
        k[j] = dk * static_cast<double>(sj < sn / 2 ? sj : sj - sn);
    }
    return k;
}

}  // namespace oscatter
