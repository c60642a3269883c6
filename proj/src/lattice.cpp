#include "abrw/lattice.hpp"

#include <cstdlib>

namespace abrw {

int linf_norm(const Site& x) {
    int m = 0;
    for (int c : x) m = std::max(m, std::abs(c));
    return m;
}

bool cube_contains(int m, const Site& x) { return linf_norm(x) <= m; }

Region block_region(const BlockIndex& b, const LatticeConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(b.i.size()) != cfg.d)
        throw std::invalid_argument("block index dimension mismatch");
    const int64_t side = cfg.side(b.scale);
    Region r;
    r.lo.resize(cfg.d);
    r.hi.resize(cfg.d);
    switch (b.kind) {
        case BlockKind::HatBlock: {
            const int64_t dur = cfg.layer_duration(b.scale);
            for (int s = 0; s < cfg.d; ++s) {
                r.lo[s] = b.i[s] * side;
                r.hi[s] = (b.i[s] + 1) * side;
            }
            r.t0 = b.k * dur;
            r.t1 = (b.k + 1) * dur;
            break;
        }
        case BlockKind::Bottom: {
            const int64_t dur = cfg.layer_duration(b.scale);
            for (int s = 0; s < cfg.d; ++s) {
                r.lo[s] = (b.i[s] - 4 * cfg.d - 1) * side;
                r.hi[s] = (b.i[s] + 4 * cfg.d + 2) * side;
            }
            r.t0 = r.t1 = b.k * dur;
            break;
        }
        case BlockKind::RBlock: {
            for (int s = 0; s < cfg.d; ++s) {
                r.lo[s] = b.i[s] * side;
                r.hi[s] = (b.i[s] + 1) * side;
            }
            r.t0 = b.k * side;
            r.t1 = (b.k + 1) * side;
            break;
        }
        case BlockKind::Pedestal: {
            for (int s = 0; s < cfg.d; ++s) {
                r.lo[s] = (b.i[s] - 3) * side;
                r.hi[s] = (b.i[s] + 4) * side;
            }
            r.t0 = r.t1 = (b.k - 1) * side;
            break;
        }
    }
    return r;
}

Site midpoint(const Site& i, int p, const LatticeConfig& cfg) {
    cfg.validate();
    const int64_t side = cfg.side(p);
    Site m(i.size());
    for (std::size_t s = 0; s < i.size(); ++s)
        m[s] = static_cast<int>(i[s] * side + side / 2);
    return m;
}

int64_t t_of(int64_t k, int p, const LatticeConfig& cfg) {
    cfg.validate();
    return k * cfg.layer_duration(p);
}

Region bottom_sites(const Site& i, int p, const LatticeConfig& cfg) {
    BlockIndex b{i, 0, p, BlockKind::Bottom};
    Region r = block_region(b, cfg);
    r.t0 = r.t1 = 0;
    return r;
}

}  // namespace abrw
