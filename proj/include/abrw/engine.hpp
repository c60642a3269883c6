// Exact continuous-time event-driven dynamics of the A/B infection process
// on a finite lattice window, with the model variants: jump-required
// infection with recuperation (standard), instant coincidence infection,
// the no-recuperation comparison process, the two frog variants with
// immobile A-particles, and a synchronized discrete-time walk mode.
//
// A whole run is a pure function of (SimConfig, seed): every random draw is
// keyed by a stable particle id, so two runs sharing ids replay identical
// per-particle randomness even when their event interleavings differ.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "abrw/lattice.hpp"
#include "abrw/rng.hpp"

namespace abrw {

enum class Variant : uint8_t {
    Standard,         // jump-required infection, recuperation at rate lambda
    Coincidence,      // infection on any coincidence, recuperation at lambda
    InstantNoRecup,   // coincidence infection, no recuperation
    FrogRemoval,      // immobile A's; recuperated particles become immune
    FrogReinsertion,  // immobile A's; coincidence infection; recuperated stay
    DiscreteN,        // standard rules, walks jump only at multiples of 1/n
};

enum class Boundary : uint8_t { Torus, Reflecting };
enum class PType : uint8_t { A, B, Immune };
enum class SeedMode : uint8_t { OneAtOrigin, OneAtMidpoint, ExplicitSites, None };

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

struct SimConfig {
    int d = 1;
    double D = 1.0;       // jump rate
    double lambda = 0.0;  // recuperation rate
    double mu_A = 1.0;    // mean initial density
    int L = 32;           // window radius, sites in [-L, L]^d
    Boundary boundary = Boundary::Torus;
    double T = 100.0;
    uint64_t seed = 1;
    Variant variant = Variant::Standard;
    int n = 0;  // step granularity for DiscreteN
    SeedMode seed_mode = SeedMode::OneAtOrigin;
    std::vector<Site> seed_sites;  // ExplicitSites mode
    bool convert_at_seed = true;
    int C0 = 2;  // block geometry for midpoint seeding
    int p = 1;
    double lambda_ref = -1.0;  // master clock rate; <= 0 means lambda itself
    bool stop_on_extinction = false;

    void validate() const;
    bool coincidence_rules() const {
        return variant == Variant::Coincidence ||
               variant == Variant::InstantNoRecup ||
               variant == Variant::FrogReinsertion;
    }
    bool frozen_a() const {
        return variant == Variant::FrogRemoval ||
               variant == Variant::FrogReinsertion;
    }
    double effective_lambda() const {
        return variant == Variant::InstantNoRecup ? 0.0 : lambda;
    }
    double clock_rate_ref() const {
        double lam = effective_lambda();
        return lambda_ref > 0.0 ? lambda_ref : lam;
    }
    std::vector<Site> resolved_seed_sites() const;
};

// ---------------------------------------------------------------------------
// Stable particle ids: coordinates (16 bits per axis, biased), a per-site
// slot and a tag distinguishing seed-added particles. Ids depend only on the
// birth site, never on the window, so enlarging the window keeps every
// shared particle's randomness identical.
// ---------------------------------------------------------------------------

constexpr int kMaxDim = 3;

uint64_t pack_pid(const Site& site, uint32_t slot, uint32_t tag);
Site unpack_pid_site(uint64_t pid, int d);
inline bool pid_is_seed_added(uint64_t pid) { return (pid >> 60) != 0; }

int64_t pack_site(const Site& x);
Site unpack_site(int64_t code, int d);

struct CensusEntry {
    uint64_t pid;
    Site site;
    PType type;
    bool seed_added;
};
using Census = std::vector<CensusEntry>;

// Poisson(mu_A) A-particles per window site plus the configured seed
// B-particles; deterministic in (seed, geometry).
Census build_census(const SimConfig& cfg);

// ---------------------------------------------------------------------------
// Event log
// ---------------------------------------------------------------------------

enum class EventKind : uint8_t {
    Jump,       // actor moved from `from` to `to`
    Infection,  // `target` turned B; `actor` is the infecting B; `to` = site
    Tick,       // a potential recuperation time of `actor` fired
    Recovery,   // actor turned B -> A (or B -> Immune); `to` = site
};

struct Event {
    double time = 0.0;
    int64_t from = 0;  // packed wrapped coordinates
    int64_t to = 0;
    uint32_t actor = 0;   // dense particle index
    uint32_t target = 0;  // Infection only
    EventKind kind = EventKind::Jump;
};

struct LoggedRun {
    SimConfig cfg;
    Census census;
    std::vector<Event> events;
};

struct RunSummary {
    bool survived = true;
    double extinction_time = -1.0;  // < 0 if never extinct
    int max_b = 0;
    int final_b = 0;
    int b_extent = 0;  // max sup-norm distance of a B from the seed center
    uint64_t n_events = 0;
    uint64_t time_ties = 0;  // distinct particles popped at equal times
};

struct SnapshotParticle {
    uint64_t pid;
    uint32_t idx;
    Site site;  // wrapped
    PType type;
    bool seed_added;
};

struct Snapshot {
    double time = 0.0;
    std::vector<SnapshotParticle> particles;
};

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

class Engine {
  public:
    explicit Engine(const SimConfig& cfg);
    Engine(const SimConfig& cfg, Census census);

    // Process every event up to time t (<= cfg.T). Events are appended to
    // `log` when given; `observer` is invoked after each applied event.
    using Observer = std::function<void(const Engine&, const Event&)>;
    void run_to(double t, std::vector<Event>* log = nullptr,
                const Observer* observer = nullptr);

    // Time of the next pending event (+inf when none before cfg.T).
    double next_event_time();
    // Process exactly one queue entry; appends what happened to `out`.
    // Returns false when nothing is pending before cfg.T.
    bool step(std::vector<Event>& out);
    void advance_clock(double t);  // no-event time advance, t >= clock()

    double clock() const { return clock_; }
    const SimConfig& config() const { return cfg_; }
    int n_particles() const { return static_cast<int>(pid_.size()); }
    uint64_t pid(uint32_t idx) const { return pid_[idx]; }
    PType type(uint32_t idx) const { return type_[idx]; }
    bool seed_added(uint32_t idx) const { return seed_added_[idx]; }
    Site position(uint32_t idx) const;       // wrapped
    int64_t packed_position(uint32_t idx) const;
    int b_count() const { return b_count_; }
    const std::vector<uint32_t>& occupants(int64_t packed_site) const;
    std::optional<uint32_t> index_of(uint64_t pid) const;

    Snapshot snapshot() const;
    RunSummary summary() const;
    ClockParams clock_params(uint32_t idx) const;

  private:
    struct QItem {
        double time;
        uint32_t idx;
        uint8_t kind;  // 0 jump, 1 tick
        bool operator>(const QItem& o) const {
            if (time != o.time) return time > o.time;
            if (idx != o.idx) return idx > o.idx;
            return kind > o.kind;
        }
    };

    void init(Census census);
    void wrap_into_window(Site& x) const;
    int64_t packed_of(const std::array<int, kMaxDim>& c) const;
    void schedule_jump(uint32_t idx, double from_time);
    void schedule_tick_from(uint32_t idx, double t);
    void make_b(uint32_t idx, uint32_t infector, double t,
                std::vector<Event>* log, const Observer* obs);
    void emit(const Event& ev, std::vector<Event>* log, const Observer* obs);
    void process_jump(uint32_t idx, double t, std::vector<Event>* log,
                      const Observer* obs);
    void process_tick(uint32_t idx, double t, std::vector<Event>* log,
                      const Observer* obs);
    void resolve_coincidence(int64_t packed_site, double t,
                             std::vector<Event>* log, const Observer* obs);
    void alone_hook(int64_t packed_site, double t);
    void note_extinction_state(double t);
    void run_discrete(double t_end, std::vector<Event>* log,
                      const Observer* obs);

    SimConfig cfg_;
    LatticeConfig lat_;
    double clock_ = 0.0;
    int b_count_ = 0;
    Site seed_center_;

    std::vector<uint64_t> pid_;
    std::vector<std::array<int, kMaxDim>> pos_;  // unwrapped coordinates
    std::vector<PType> type_;
    std::vector<uint8_t> seed_added_;
    std::vector<double> next_jump_;
    std::vector<uint8_t> next_dir_;
    std::vector<uint64_t> walk_ctr_;
    std::vector<double> sched_tick_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> occ_;
    std::unordered_map<uint64_t, uint32_t> pid_to_idx_;
    std::vector<QItem> heap_;

    RunSummary sum_;
    double last_pop_time_ = -1.0;
    uint32_t last_pop_idx_ = 0;
    std::vector<Event> pending_init_;  // time-0 conversions awaiting a log
    std::vector<double> cached_tick_;  // DiscreteN: next pending tick per B

    static const std::vector<uint32_t> kNoOccupants;
};

// Convenience: build, run to cfg.T, return the full log.
LoggedRun run_logged(const SimConfig& cfg);
RunSummary run_summary_only(const SimConfig& cfg);

}  // namespace abrw
