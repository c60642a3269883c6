// Integer-lattice geometry: sup-norm balls, the renormalization blocks at
// every scale, their bottoms and pedestals, block midpoints and layer times.
// Regions are descriptors over half-open intervals; membership tests are
// pure integer comparisons.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace abrw {

using Site = std::vector<int>;

int linf_norm(const Site& x);
bool cube_contains(int m, const Site& x);

// Scale geometry. side(p) = C0^(6p) is the spatial side of a scale-p block;
// a hat-block extends p^q * side(p) in time with q = 2d+1.
struct LatticeConfig {
    int d = 1;
    int C0 = 2;  // even, >= 2

    void validate() const {
        if (d < 1) throw std::invalid_argument("dimension must be >= 1");
        if (C0 < 2 || C0 % 2 != 0)
            throw std::invalid_argument("C0 must be an even integer >= 2");
    }
    int q() const { return 2 * d + 1; }
    int64_t side(int scale) const {
        if (scale <= 0) throw std::invalid_argument("scale must be positive");
        int64_t s = 1;
        for (int i = 0; i < 6 * scale; ++i) s *= C0;
        return s;
    }
    int64_t layer_duration(int p) const {
        int64_t pq = 1;
        for (int i = 0; i < q(); ++i) pq *= p;
        return pq * side(p);
    }
};

enum class BlockKind { HatBlock, Bottom, RBlock, Pedestal };

struct BlockIndex {
    Site i;
    int64_t k = 0;
    int scale = 1;
    BlockKind kind = BlockKind::HatBlock;
};

// Product of half-open coordinate intervals [lo, hi) with a half-open time
// interval [t0, t1); bottoms and pedestals are single-time slices (t1 == t0).
struct Region {
    std::vector<int64_t> lo, hi;
    int64_t t0 = 0, t1 = 0;

    bool contains_site(const Site& x) const {
        for (std::size_t s = 0; s < lo.size(); ++s)
            if (x[s] < lo[s] || x[s] >= hi[s]) return false;
        return true;
    }
    bool contains(const Site& x, double t) const {
        if (t1 == t0) {
            if (t != static_cast<double>(t0)) return false;
        } else if (t < static_cast<double>(t0) || t >= static_cast<double>(t1)) {
            return false;
        }
        return contains_site(x);
    }
};

Region block_region(const BlockIndex& b, const LatticeConfig& cfg);

// Spatial midpoint of the scale-p column i, integral because C0 is even.
Site midpoint(const Site& i, int p, const LatticeConfig& cfg);

// Start time of layer k at scale p: k * p^q * side(p).
int64_t t_of(int64_t k, int p, const LatticeConfig& cfg);

// Spatial part of the bottom of the scale-p block at column i.
Region bottom_sites(const Site& i, int p, const LatticeConfig& cfg);

}  // namespace abrw
