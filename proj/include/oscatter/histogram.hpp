#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscatter {

struct HistogramError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-detector-site hit counts accumulated over shots. Merging is the only
// cross-worker operation and is associative and commutative.
struct Histogram {
    std::vector<std::uint64_t> site_counts;
    std::vector<double> site_positions;  // 1D transverse coordinate per site
    std::uint64_t elastic_count = 0;     // "no detection this shot"
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;

    void check_conservation() const {
        std::uint64_t total = elastic_count;
        for (auto c : site_counts) total += c;
        if (total != shots) throw HistogramError("histogram counts do not sum to shots");
    }
};

Histogram merge(const Histogram& a, const Histogram& b);

struct VisibilityOptions {
    int smooth_window = 3;    // odd moving-average width for noise control
    int envelope_window = 0;  // 0: auto = populated span / 4
    double lobe_fraction = 0.5;
    std::uint64_t min_counts = 100;
};

// Fringe contrast (max-min)/(max+min) of envelope-normalized smoothed counts
// over the central lobe. Needs at least two populated sites and min_counts
// hits inside the lobe.
double visibility(const Histogram& h, const VisibilityOptions& opt = {});

// Dominant fringe period (in site-index units) of the envelope-normalized
// counts, from the peak of the discrete spectrum with parabolic interpolation.
// Returns 0 when no off-DC peak stands out.
double fringe_period_sites(const Histogram& h, const VisibilityOptions& opt = {});

// CSV with site position and count per line, full precision.
std::string histogram_csv(const Histogram& h);

}  // namespace oscatter
