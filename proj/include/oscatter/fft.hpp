#pragma once

#include <vector>

#include "oscatter/math_util.hpp"

namespace oscatter {

// Radix-2 in-place complex FFT with precomputed twiddles. Power-of-two sizes
// only; bit-identical results independent of call context.
class Fft {
  public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }
    void forward(cdouble* data) const;   // X_k = sum_j x_j e^{-2pi i jk/N}
    void inverse(cdouble* data) const;   // includes the 1/N factor

    // DFT frequency k_j in angular units for sample spacing h:
    // j < N/2 -> 2 pi j/(N h), else negative branch.
    static std::vector<double> frequencies(std::size_t n, double h);

  private:
    void transform(cdouble* data, bool inv) const;
    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<cdouble> twiddle_;  // forward twiddles per stage, concatenated
};

}  // namespace oscatter
