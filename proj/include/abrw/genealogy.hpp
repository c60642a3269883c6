// Reconstruction of genealogical infection paths from an event log, and the
// maximal-jump functional over horse-switching space-time paths, with an
// exhaustive oracle for small instances.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abrw/engine.hpp"

namespace abrw {

// Carrier chain explaining why a particle is infected at a given time:
// switch times s_1 < ... < s_l and carriers rho_0 ... rho_l; rho_0 is B from
// time 0, carrier i holds type B on [s_i, s_{i+1}] and hands the infection
// over at a co-location caused by a jump.
struct GenealogicalPath {
    std::vector<double> switch_times;
    std::vector<uint32_t> carriers;
    double terminal_time = 0.0;
};

// One B-interval of a particle: infected at `start` by `infector`
// (kNoInfector for particles that are B from time 0), recovered at `end`.
struct Spell {
    double start = 0.0;
    double end = 0.0;  // +inf while open
    uint32_t infector = 0;
};

constexpr uint32_t kNoInfector = 0xFFFFFFFFu;

// Forward pass over a logged run: per-particle B-spells and jump histories,
// plus the queries the path checks need.
class RunAnalysis {
  public:
    explicit RunAnalysis(const LoggedRun& run);

    int n_particles() const { return static_cast<int>(spells_.size()); }
    const std::vector<Spell>& spells(uint32_t idx) const { return spells_[idx]; }
    bool is_b_at(uint32_t idx, double t) const;
    int64_t position_at(uint32_t idx, double t) const;  // packed wrapped site
    std::vector<uint32_t> b_particles_at(double t) const;

    // Backward reconstruction; throws std::runtime_error when the log shows
    // a B-particle without provenance.
    GenealogicalPath reconstruct(uint32_t idx, double s) const;

    // Segment-by-segment check of a path against the log.
    bool validate(const GenealogicalPath& path, std::string* why = nullptr) const;

    const LoggedRun& run() const { return *run_; }

  private:
    const Spell* spell_covering(uint32_t idx, double t) const;

    const LoggedRun* run_;
    std::vector<std::vector<Spell>> spells_;
    // per-particle jump history, ascending in time
    struct JumpRec {
        double time;
        int64_t from, to;
    };
    std::vector<std::vector<JumpRec>> jumps_;
    std::vector<int64_t> start_pos_;
};

// J(t, x): maximal number of jumps during [0, t] over space-time paths that
// start at (x, 0), ride one particle at a time and may change mounts at
// co-locations. seed-added particles take part iff include_seed_added.
// Returns 0 when x is unoccupied at time 0.
int64_t max_jumps(const LoggedRun& run, const Site& x, double t,
                  bool include_seed_added = true);

// Same, also exposing every particle's best value (-1 = not reachable).
struct JPathValues {
    int64_t best = 0;
    std::vector<int64_t> value;
};
JPathValues max_jumps_values(const LoggedRun& run, const Site& x, double t,
                             bool include_seed_added = true);

// Exhaustive enumeration of all horse-switching schedules; test oracle.
// Throws when the instance has more than max_events jump events.
int64_t brute_force_jpaths(const LoggedRun& run, const Site& x, double t,
                           bool include_seed_added = true,
                           std::size_t max_events = 24);

// Streaming version of the dynamic program, fed event by event from a live
// engine; avoids storing the log on long runs. Feed only events with
// nondecreasing times and read best() at checkpoints.
class JumpFunctionalTracker {
  public:
    JumpFunctionalTracker(const Engine& engine, const Site& x,
                          bool include_seed_added = true);
    void on_event(const Engine& engine, const Event& ev);
    int64_t best() const { return best_; }

  private:
    std::vector<int64_t> value_;
    std::vector<uint8_t> eligible_;
    int64_t best_ = 0;
};

}  // namespace abrw
