#pragma once

#include <array>
#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscatter {

// Oscillator excitation level: d non-negative integers. The all-zero index
// labels the elastic channel.
struct MultiIndex {
    int dim = 1;
    std::array<int, 3> n{0, 0, 0};

    MultiIndex() = default;
    MultiIndex(int d, std::array<int, 3> comps) : dim(d), n(comps) {
        if (d < 1 || d > 3) throw std::invalid_argument("MultiIndex: dimension must be 1, 2 or 3");
        for (int j = 0; j < dim; ++j)
            if (n[j] < 0) throw std::invalid_argument("MultiIndex: negative component");
        for (int j = dim; j < 3; ++j) n[j] = 0;
    }
    static MultiIndex zero(int d) { return MultiIndex(d, {0, 0, 0}); }
    static MultiIndex axis(int d, int axis_idx, int level) {
        std::array<int, 3> c{0, 0, 0};
        c[axis_idx] = level;
        return MultiIndex(d, c);
    }

    int total() const { return n[0] + n[1] + n[2]; }
    bool is_zero() const { return total() == 0; }
    int operator[](int j) const { return n[j]; }

    bool operator==(const MultiIndex& o) const { return dim == o.dim && n == o.n; }
    // lexicographic; used for deterministic channel ordering and tie-breaks
    bool operator<(const MultiIndex& o) const { return n < o.n; }

    std::string str() const {
        std::string s = "(";
        for (int j = 0; j < dim; ++j) s += std::to_string(n[j]) + (j + 1 < dim ? "," : "");
        return s + ")";
    }
};

// All indices with every component <= cap, lexicographic order, zero first.
inline std::vector<MultiIndex> enumerate_levels(int dim, int cap) {
    if (cap < 0) throw std::invalid_argument("enumerate_levels: negative cap");
    std::vector<MultiIndex> out;
    const int c1 = dim >= 2 ? cap : 0;
    const int c2 = dim >= 3 ? cap : 0;
    for (int a = 0; a <= cap; ++a)
        for (int b = 0; b <= c1; ++b)
            for (int c = 0; c <= c2; ++c) out.push_back(MultiIndex(dim, {a, b, c}));
    return out;
}

}  // namespace oscatter
