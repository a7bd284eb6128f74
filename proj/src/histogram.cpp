#include "oscatter/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "oscatter/fft.hpp"
#include "oscatter/math_util.hpp"

namespace oscatter {

Histogram merge(const Histogram& a, const Histogram& b) {
    if (a.config_hash != b.config_hash) throw HistogramError("merge: config hash mismatch");
    if (a.site_counts.size() != b.site_counts.size()) throw HistogramError("merge: site count mismatch");
    Histogram out = a;
    for (std::size_t i = 0; i < out.site_counts.size(); ++i) out.site_counts[i] += b.site_counts[i];
    out.elastic_count += b.elastic_count;
    out.shots += b.shots;
    return out;
}

namespace {

struct Profile {
    std::vector<double> ratio;  // envelope-normalized smoothed counts
    int lo = 0, hi = -1;        // populated index range
};

std::vector<double> moving_average(const std::vector<double>& v, int window) {
    if (window <= 1) return v;
    const int half = window / 2;
    std::vector<double> out(v.size(), 0.0);
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
        double s = 0;
        int n = 0;
        for (int j = std::max(0, i - half); j <= std::min<int>(v.size() - 1, i + half); ++j) {
            s += v[j];
            ++n;
        }
        out[i] = s / n;
    }
    return out;
}

Profile envelope_normalized(const Histogram& h, const VisibilityOptions& opt) {
    Profile pr;
    const auto& c = h.site_counts;
    int lo = 0, hi = static_cast<int>(c.size()) - 1;
    while (lo <= hi && c[lo] == 0) ++lo;
    while (hi >= lo && c[hi] == 0) --hi;
    pr.lo = lo;
    pr.hi = hi;
    if (hi < lo) return pr;

    std::vector<double> counts(c.begin() + lo, c.begin() + hi + 1);
    auto smoothed = moving_average(counts, opt.smooth_window);
    int env_w = opt.envelope_window;
    if (env_w <= 0) env_w = std::max(3, static_cast<int>(counts.size()) / 4) | 1;
    auto env = moving_average(counts, env_w);

    pr.ratio.resize(counts.size(), 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i)
        pr.ratio[i] = env[i] > 0 ? smoothed[i] / env[i] : 0.0;
    return pr;
}

}  // namespace

double visibility(const Histogram& h, const VisibilityOptions& opt) {
    int populated = 0;
    for (auto c : h.site_counts)
        if (c > 0) ++populated;
    if (populated < 2) throw HistogramError("visibility: need at least two populated sites");

    Profile pr = envelope_normalized(h, opt);
    const int n = static_cast<int>(pr.ratio.size());
    const int lobe = std::max(2, static_cast<int>(std::lround(n * opt.lobe_fraction)));
    const int start = (n - lobe) / 2;

    std::uint64_t lobe_counts = 0;
    for (int i = start; i < start + lobe; ++i) lobe_counts += h.site_counts[pr.lo + i];
    if (lobe_counts < opt.min_counts)
        throw HistogramError("visibility: fewer than " + std::to_string(opt.min_counts) +
                             " counts in the central lobe");

    double mx = pr.ratio[start], mn = pr.ratio[start];
    for (int i = start; i < start + lobe; ++i) {
        mx = std::max(mx, pr.ratio[i]);
        mn = std::min(mn, pr.ratio[i]);
    }
    if (mx + mn == 0) return 0.0;
    return (mx - mn) / (mx + mn);
}

double fringe_period_sites(const Histogram& h, const VisibilityOptions& opt) {
    Profile pr = envelope_normalized(h, opt);
    const std::size_t n = pr.ratio.size();
    if (n < 4) return 0.0;

    double mean = 0;
    for (double r : pr.ratio) mean += r;
    mean /= static_cast<double>(n);

    std::size_t npad = 4;
    while (npad < 4 * n) npad <<= 1;
    std::vector<cdouble> buf(npad, cdouble(0));
    // Hann taper keeps envelope-edge leakage out of the low bins
    for (std::size_t i = 0; i < n; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * pi * i / (n - 1.0));
        buf[i] = (pr.ratio[i] - mean) * hann;
    }
    Fft fft(npad);
    fft.forward(buf.data());

    // dominant bin below Nyquist; a credible period must fit at least twice
    // into the populated span
    std::size_t kbest = 0;
    double best = 0;
    const std::size_t kmin = std::max<std::size_t>(1, 2 * npad / n);
    for (std::size_t k = kmin + 1; k < npad / 2; ++k) {
        const double mag = std::abs(buf[k]);
        if (mag > best) {
            best = mag;
            kbest = k;
        }
    }
    if (kbest == 0 || best < 1e-12) return 0.0;

    // parabolic refinement on log magnitude
    const double m0 = std::abs(buf[kbest - 1]), m1 = best, m2 = std::abs(buf[kbest + 1]);
    double delta = 0;
    const double denom = m0 - 2 * m1 + m2;
    if (std::abs(denom) > 1e-300) delta = 0.5 * (m0 - m2) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
    return static_cast<double>(npad) / (static_cast<double>(kbest) + delta);
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "site_position,count\n";
    for (std::size_t i = 0; i < h.site_counts.size(); ++i)
        out += format_full(h.site_positions[i]) + "," + std::to_string(h.site_counts[i]) + "\n";
    out += "elastic," + std::to_string(h.elastic_count) + "\n";
    out += "shots," + std::to_string(h.shots) + "\n";
    return out;
}

}  // namespace oscatter
