#include "abrw/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define ABRW_X86 1
#else
#define ABRW_X86 0
#endif

namespace abrw {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    lo = static_cast<uint32_t>(p);
    hi = static_cast<uint32_t>(p >> 32);
}

}  // namespace

PhiloxBlock philox4x32(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3,
                       uint32_t k0, uint32_t k1) {
    for (int round = 0; round < 10; ++round) {
        uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kPhiloxM0, c0, lo0, hi0);
        mulhilo(kPhiloxM1, c2, lo1, hi1);
        uint32_t n0 = hi1 ^ c1 ^ k0;
        uint32_t n1 = lo1;
        uint32_t n2 = hi0 ^ c3 ^ k1;
        uint32_t n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return PhiloxBlock{{c0, c1, c2, c3}};
}

void philox_many_scalar(const uint32_t* c0, const uint32_t* c1,
                        const uint32_t* c2, const uint32_t* c3, uint32_t k0,
                        uint32_t k1, std::size_t n, uint64_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        PhiloxBlock b = philox4x32(c0[i], c1[i], c2[i], c3[i], k0, k1);
        out[i] = (static_cast<uint64_t>(b.x[1]) << 32) | b.x[0];
    }
}

#if ABRW_X86

bool philox_avx2_available() { return __builtin_cpu_supports("avx2"); }

namespace {

// 8-lane 32x32 -> 64 multiply, returning low and high 32-bit halves.
__attribute__((target("avx2"))) inline void mulhilo8(__m256i a, uint32_t m,
                                                     __m256i& lo,
                                                     __m256i& hi) {
    const __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
    __m256i pe = _mm256_mul_epu32(a, mv);  // lanes 0,2,4,6
    __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), mv);
    lo = _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0xAA);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), po, 0xAA);
}

}  // namespace

__attribute__((target("avx2"))) void philox_many_avx2(
    const uint32_t* c0, const uint32_t* c1, const uint32_t* c2,
    const uint32_t* c3, uint32_t k0, uint32_t k1, std::size_t n,
    uint64_t* out) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i x0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c0 + i));
        __m256i x1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c1 + i));
        __m256i x2 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c2 + i));
        __m256i x3 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c3 + i));
        uint32_t kk0 = k0, kk1 = k1;
        for (int round = 0; round < 10; ++round) {
            __m256i lo0, hi0, lo1, hi1;
            mulhilo8(x0, kPhiloxM0, lo0, hi0);
            mulhilo8(x2, kPhiloxM1, lo1, hi1);
            const __m256i kv0 = _mm256_set1_epi32(static_cast<int>(kk0));
            const __m256i kv1 = _mm256_set1_epi32(static_cast<int>(kk1));
            __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), kv0);
            __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), kv1);
            x0 = n0;
            x1 = lo1;
            x2 = n2;
            x3 = lo0;
            kk0 += kPhiloxW0;
            kk1 += kPhiloxW1;
        }
        // out = (x1 << 32) | x0, lane by lane
        __m256i lo_even = _mm256_and_si256(x0, _mm256_set1_epi64x(0xFFFFFFFFll));
        __m256i hi_even = _mm256_slli_epi64(_mm256_and_si256(x1, _mm256_set1_epi64x(0xFFFFFFFFll)), 32);
        __m256i even = _mm256_or_si256(lo_even, hi_even);  // lanes 0,2,4,6
        __m256i lo_odd = _mm256_srli_epi64(x0, 32);
        __m256i hi_odd = _mm256_and_si256(x1, _mm256_set1_epi64x(0xFFFFFFFF00000000ull));
        __m256i odd = _mm256_or_si256(lo_odd, hi_odd);  // lanes 1,3,5,7
        alignas(32) uint64_t ev[4], od[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(ev), even);
        _mm256_store_si256(reinterpret_cast<__m256i*>(od), odd);
        out[i + 0] = ev[0];
        out[i + 1] = od[0];
        out[i + 2] = ev[1];
        out[i + 3] = od[1];
        out[i + 4] = ev[2];
        out[i + 5] = od[2];
        out[i + 6] = ev[3];
        out[i + 7] = od[3];
    }
    if (i < n) philox_many_scalar(c0 + i, c1 + i, c2 + i, c3 + i, k0, k1, n - i, out + i);
}

#else

bool philox_avx2_available() { return false; }

void philox_many_avx2(const uint32_t* c0, const uint32_t* c1,
                      const uint32_t* c2, const uint32_t* c3, uint32_t k0,
                      uint32_t k1, std::size_t n, uint64_t* out) {
    philox_many_scalar(c0, c1, c2, c3, k0, k1, n, out);
}

#endif

void philox_many(const uint32_t* c0, const uint32_t* c1, const uint32_t* c2,
                 const uint32_t* c3, uint32_t k0, uint32_t k1, std::size_t n,
                 uint64_t* out) {
    static const bool use_avx2 = philox_avx2_available();
    if (use_avx2)
        philox_many_avx2(c0, c1, c2, c3, k0, k1, n, out);
    else
        philox_many_scalar(c0, c1, c2, c3, k0, k1, n, out);
}

namespace {

inline void key_parts(const StreamKey& k, uint32_t ctr[4], uint32_t key[2]) {
    uint32_t purpose = static_cast<uint32_t>(k.purpose);
    ctr[0] = static_cast<uint32_t>(k.counter);
    ctr[1] = static_cast<uint32_t>(k.counter >> 32);
    ctr[2] = static_cast<uint32_t>(k.id);
    ctr[3] = static_cast<uint32_t>(k.id >> 32);
    key[0] = static_cast<uint32_t>(k.seed) + purpose * kPhiloxW0;
    key[1] = static_cast<uint32_t>(k.seed >> 32) + purpose * kPhiloxW1;
}

}  // namespace

uint64_t draw_u64(const StreamKey& k) {
    uint32_t ctr[4], key[2];
    key_parts(k, ctr, key);
    PhiloxBlock b = philox4x32(ctr[0], ctr[1], ctr[2], ctr[3], key[0], key[1]);
    return (static_cast<uint64_t>(b.x[1]) << 32) | b.x[0];
}

double uniform01(uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

double uniform01_pos(uint64_t bits) {
    return static_cast<double>((bits >> 11) | 1u) * 0x1.0p-53;
}

double exponential(double mean, uint64_t bits) {
    return -mean * std::log(uniform01_pos(bits));
}

uint32_t uniform_below(uint32_t n, uint64_t bits) {
    return static_cast<uint32_t>(bits % n);
}

uint32_t poisson_inverse(double mean, double u) {
    assert(mean >= 0.0);
    if (mean == 0.0) return 0;
    double p = std::exp(-mean);
    double cdf = p;
    uint32_t k = 0;
    const uint32_t cap =
        static_cast<uint32_t>(mean + 40.0 * std::sqrt(mean) + 60.0);
    while (u >= cdf && k < cap) {
        ++k;
        p *= mean / k;
        cdf += p;
    }
    return k;
}

std::vector<uint32_t> sample_poisson_counts(uint64_t seed,
                                            const std::vector<uint64_t>& ids,
                                            double mean) {
    const std::size_t n = ids.size();
    std::vector<uint32_t> c0(n, 0), c1(n, 0), c2(n), c3(n);
    for (std::size_t i = 0; i < n; ++i) {
        c2[i] = static_cast<uint32_t>(ids[i]);
        c3[i] = static_cast<uint32_t>(ids[i] >> 32);
    }
    uint32_t purpose = static_cast<uint32_t>(Purpose::InitField);
    uint32_t k0 = static_cast<uint32_t>(seed) + purpose * kPhiloxW0;
    uint32_t k1 = static_cast<uint32_t>(seed >> 32) + purpose * kPhiloxW1;
    std::vector<uint64_t> bits(n);
    philox_many(c0.data(), c1.data(), c2.data(), c3.data(), k0, k1, n,
                bits.data());
    std::vector<uint32_t> counts(n);
    for (std::size_t i = 0; i < n; ++i)
        counts[i] = poisson_inverse(mean, uniform01(bits[i]));
    return counts;
}

uint64_t replica_seed(uint64_t seed, uint64_t replica) {
    return draw_u64(StreamKey{seed, replica, Purpose::ReplicaMix, 0});
}

// ---------------------------------------------------------------------------
// Clock buckets
// ---------------------------------------------------------------------------

namespace {

constexpr uint64_t kBucketStride = 64;

struct Bucket {
    double t[62];
    int n = 0;
};

// Master ticks (before thinning) of bucket j, ascending, paired with their
// acceptance uniforms.
inline void load_bucket(const ClockParams& cp, uint64_t j, Bucket& ticks,
                        Bucket& accepts) {
    const double h = 1.0 / cp.rate_ref;
    StreamKey count_key{cp.seed, cp.id, Purpose::TickCount, j * kBucketStride};
    uint32_t n = poisson_inverse(1.0, uniform01(draw_u64(count_key)));
    if (n > 62) n = 62;  // P ~ 1e-86; keeps the fixed-size buffer safe
    struct Item {
        double t, u;
    } items[62];
    for (uint32_t m = 0; m < n; ++m) {
        StreamKey pos_key{cp.seed, cp.id, Purpose::TickPos,
                          j * kBucketStride + 1 + m};
        StreamKey thin_key{cp.seed, cp.id, Purpose::TickThin,
                           j * kBucketStride + 1 + m};
        items[m].t = (static_cast<double>(j) + uniform01(draw_u64(pos_key))) * h;
        items[m].u = uniform01(draw_u64(thin_key));
    }
    std::sort(items, items + n, [](const Item& a, const Item& b) { return a.t < b.t; });
    ticks.n = accepts.n = static_cast<int>(n);
    for (uint32_t m = 0; m < n; ++m) {
        ticks.t[m] = items[m].t;
        accepts.t[m] = items[m].u;
    }
}

}  // namespace

double next_tick_geq(const ClockParams& cp, double t, double horizon) {
    if (cp.rate_ref <= 0.0 || cp.accept <= 0.0) return kInfTime;
    if (t < 0.0) t = 0.0;
    const double h = 1.0 / cp.rate_ref;
    uint64_t j = static_cast<uint64_t>(t / h);
    Bucket ticks, accepts;
    while (static_cast<double>(j) * h <= horizon) {
        load_bucket(cp, j, ticks, accepts);
        for (int m = 0; m < ticks.n; ++m) {
            if (ticks.t[m] >= t && accepts.t[m] < cp.accept) {
                return ticks.t[m] <= horizon ? ticks.t[m] : kInfTime;
            }
        }
        ++j;
    }
    return kInfTime;
}

bool has_tick_in(const ClockParams& cp, double a, double b) {
    double t = next_tick_geq(cp, a, b);
    return t <= b;
}

std::vector<double> ticks_in(const ClockParams& cp, double a, double b) {
    std::vector<double> out;
    if (cp.rate_ref <= 0.0 || cp.accept <= 0.0 || b < a) return out;
    if (a < 0.0) a = 0.0;
    const double h = 1.0 / cp.rate_ref;
    Bucket ticks, accepts;
    for (uint64_t j = static_cast<uint64_t>(a / h);
         static_cast<double>(j) * h <= b; ++j) {
        load_bucket(cp, j, ticks, accepts);
        for (int m = 0; m < ticks.n; ++m)
            if (ticks.t[m] >= a && ticks.t[m] <= b && accepts.t[m] < cp.accept)
                out.push_back(ticks.t[m]);
    }
    return out;
}

}  // namespace abrw
