// Paired simulations that share randomness, turning the model's monotonicity
// properties into exact runtime assertions: thinned recuperation clocks give
// B-set inclusion across rates, the instant-infection process without
// recuperation dominates the standard one, and adding initial particles can
// only enlarge the B-set. A single violation is an engine bug, never a
// statistical fluctuation.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "abrw/engine.hpp"

namespace abrw {

struct CoupleViolation {
    double time = 0.0;
    uint64_t pid = 0;
    std::string what;
};

struct DominanceReport {
    uint64_t event_times_checked = 0;
    uint64_t inclusion_checks = 0;
    bool pass = true;
    std::optional<CoupleViolation> first_violation;
};

// Same walks, recuperation clocks coupled by thinning (rate1 <= rate2):
// every particle of type B under rate2 must be B under rate1, at every
// event time of either run.
DominanceReport couple_rate(const SimConfig& base, double rate1, double rate2);

// The standard process at cfg.lambda against the instant-coincidence
// process without recuperation started from the saturated state; the
// former's B-set stays inside the latter's.
DominanceReport couple_no_recuperation(const SimConfig& cfg);

// Removes each non-seed particle with probability removal_fraction
// (deterministically, keyed by pid and salt) to form the smaller initial
// state; particle presence and B-type must stay dominated by the full run.
DominanceReport couple_initial(const SimConfig& cfg, double removal_fraction,
                               uint64_t salt);

}  // namespace abrw
