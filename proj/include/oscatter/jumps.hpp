#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscatter/grid.hpp"
#include "oscatter/model.hpp"
#include "oscatter/multi_index.hpp"
#include "oscatter/rng.hpp"

namespace oscatter {

struct JumpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JumpEntry {
    int site = 0;
    MultiIndex level;
    double weight = 0;       // coherent transition overlap |<pair_density, psi>|^2
    double source_norm = 0;  // cutout-piece L2 norm^2 (the position-space overlap integral)
    bool closed = false;     // kinematically closed: weight exactly zero
};

// Raw weights over {elastic} u {(site, level != 0)} for one incident field.
struct JumpWeightTable {
    std::vector<JumpEntry> entries;  // site-major, levels lexicographic
    double elastic_weight = 0;       // coherent elastic-source norm^2
    double inelastic_source_norm = 0;
    double inelastic_weight_total = 0;
    double tail_fraction = 0;        // truncated mass / inelastic mass (Poisson bound)
    double k_in = 0;
    std::uint64_t fingerprint = 0;   // incident-field hash
    bool no_detection = false;       // every inelastic weight vanished

    // maximum allowed truncated fraction before a run must abort
    static constexpr double tail_abort_fraction = 1e-6;
};

// Normalized per-shot outcome distribution.
struct ProbabilityTable {
    double elastic_prob = 1.0;
    std::vector<JumpEntry> outcomes;     // with weight = probability
    std::vector<double> cumulative;      // over outcomes, after the elastic slot
    std::uint64_t fingerprint = 0;
    double inelastic_fraction = 0;
    double total() const;
};

struct DetectionEvent {
    bool elastic = true;
    int site = -1;
    MultiIndex level;
    double deposited_energy = 0;  // hbar * Omega * |n|
    std::array<double, 3> site_position{0, 0, 0};
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
};

// Builds the raw weight table from an incident field by grid quadrature of
// the transition overlaps; elastic weight from the coherent ground-state
// cutout norm. The field must be L2-normalized on its grid. Closed channels
// get weight exactly zero. Aborts when the Poisson-bound estimate of the
// truncated level mass exceeds tail_abort_fraction of the inelastic mass.
JumpWeightTable jump_weights(const ScalarField& psi_in, const ModelConfig& model);

// Heuristic elastic/inelastic branching from the first-order source norms.
double default_inelastic_fraction(const JumpWeightTable& table);

// Probabilities over {elastic} u open channels: P(elastic) = 1 - eta, the
// inelastic block carries eta split in proportion to the raw weights. A table
// with no inelastic weight collapses to P(elastic) = 1.
ProbabilityTable normalize(const JumpWeightTable& table, double eta_inelastic);

// Draws exactly one outcome; deterministic given the stream key.
DetectionEvent sample_jump(const ProbabilityTable& table, RngStream& stream,
                           const ModelConfig& model);

// Diagnostic argmax over the inelastic entries; ties break to the lowest site
// index, then lexicographically smallest level.
std::pair<int, MultiIndex> argmax_jump(const JumpWeightTable& table);

// Line-delimited event-log encoding.
std::string event_log_header();
std::string event_log_line(std::uint64_t shot, const DetectionEvent& ev);

}  // namespace oscatter
