// Deterministic, splittable randomness built on the Philox-4x32-10 counter
// block cipher. Every draw in the project is a pure function of
// (seed, stream id, purpose, counter), so any simulation can be replayed or
// coupled against another run that shares part of its randomness.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace abrw {

// ---------------------------------------------------------------------------
// Philox core
// ---------------------------------------------------------------------------

struct PhiloxBlock {
    uint32_t x[4];
};

// One 128-bit block, scalar reference kernel.
PhiloxBlock philox4x32(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3,
                       uint32_t k0, uint32_t k1);

// Batch interface: counters given as structure-of-arrays, outputs the first
// 64 bits of each block. The active kernel is chosen at runtime (AVX2 on
// x86-64 when available, scalar otherwise); both produce identical bits.
void philox_many(const uint32_t* c0, const uint32_t* c1, const uint32_t* c2,
                 const uint32_t* c3, uint32_t k0, uint32_t k1, std::size_t n,
                 uint64_t* out);

// Kernel variants exposed for equivalence tests.
void philox_many_scalar(const uint32_t* c0, const uint32_t* c1,
                        const uint32_t* c2, const uint32_t* c3, uint32_t k0,
                        uint32_t k1, std::size_t n, uint64_t* out);
bool philox_avx2_available();
void philox_many_avx2(const uint32_t* c0, const uint32_t* c1,
                      const uint32_t* c2, const uint32_t* c3, uint32_t k0,
                      uint32_t k1, std::size_t n, uint64_t* out);

// ---------------------------------------------------------------------------
// Keyed streams
// ---------------------------------------------------------------------------

// Stream purposes. Distinct purposes give independent streams for the same
// (seed, stream id) pair; walk and recuperation randomness of one particle
// never interact.
enum class Purpose : uint32_t {
    WalkGap = 1,       // exponential gaps between jumps
    WalkDir = 2,       // jump directions
    TickCount = 3,     // recuperation ticks per bucket
    TickPos = 4,       // tick positions within a bucket
    TickThin = 5,      // thinning acceptance for ticks
    InitField = 6,     // initial Poisson occupation numbers
    ReplicaMix = 7,    // per-replica seed derivation
    DiscreteStep = 8,  // synchronized steps of the discrete-time walk
};

struct StreamKey {
    uint64_t seed = 0;
    uint64_t id = 0;  // particle id, site id, or replica index
    Purpose purpose = Purpose::WalkGap;
    uint64_t counter = 0;
};

uint64_t draw_u64(const StreamKey& k);

// Uniforms on [0,1); the "pos" variant never returns 0 (safe for logs).
double uniform01(uint64_t bits);
double uniform01_pos(uint64_t bits);

inline double uniform01(const StreamKey& k) { return uniform01(draw_u64(k)); }

// Exponential with the given mean, strictly positive.
double exponential(double mean, uint64_t bits);

// Uniform integer in [0, n) by 64-bit reduction (bias ~ n / 2^64).
uint32_t uniform_below(uint32_t n, uint64_t bits);

// Poisson sampling by CDF inversion from a single uniform.
uint32_t poisson_inverse(double mean, double u);

// One Poisson(mean) count per stream id; uses the batch Philox kernel.
std::vector<uint32_t> sample_poisson_counts(uint64_t seed,
                                            const std::vector<uint64_t>& ids,
                                            double mean);

uint64_t replica_seed(uint64_t seed, uint64_t replica);

// ---------------------------------------------------------------------------
// Recuperation clocks
// ---------------------------------------------------------------------------
//
// A clock is a rate `accept * rate_ref` Poisson point process on [0, inf),
// realized by buckets of width 1/rate_ref. Bucket j holds Poisson(1) master
// ticks placed uniformly; a tick survives thinning iff its acceptance
// uniform is < accept. Two clocks with the same (seed, id, rate_ref) and
// accept1 <= accept2 have tick sets related by exact inclusion, which is
// what makes rate monotonicity checkable as a set assertion rather than a
// distributional one. Queries are stateless pure functions, so snapshots
// carry no clock state.

struct ClockParams {
    uint64_t seed = 0;
    uint64_t id = 0;
    double rate_ref = 0.0;  // master rate; <= 0 means no ticks at all
    double accept = 1.0;    // retain probability, rate = accept * rate_ref
};

inline ClockParams thin_clock(const ClockParams& base, double rate);

// First tick at time >= t, or +inf if none up to `horizon`.
double next_tick_geq(const ClockParams& cp, double t, double horizon);

// Any tick in the closed interval [a, b]?
bool has_tick_in(const ClockParams& cp, double a, double b);

// All ticks in [a, b], ascending (test and analysis use).
std::vector<double> ticks_in(const ClockParams& cp, double a, double b);

inline ClockParams thin_clock(const ClockParams& base, double rate) {
    ClockParams cp = base;
    cp.accept = base.rate_ref > 0.0 ? rate / base.rate_ref : 0.0;
    return cp;
}

inline ClockParams make_clock(uint64_t seed, uint64_t id, double rate) {
    return ClockParams{seed, id, rate, 1.0};
}

constexpr double kInfTime = std::numeric_limits<double>::infinity();

}  // namespace abrw
