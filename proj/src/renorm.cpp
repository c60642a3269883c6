#include "abrw/renorm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace abrw {

namespace {
constexpr int kBias = 0x8000;
}

int64_t pack_point(const Point& p) {
    assert(p.size() <= 4);
    int64_t code = 0;
    for (std::size_t s = 0; s < p.size(); ++s) {
        assert(std::abs(p[s]) < kBias);
        code |= static_cast<int64_t>(p[s] + kBias) << (16 * s);
    }
    return code;
}

Point unpack_point(int64_t code, int dim) {
    Point p(dim);
    for (int s = 0; s < dim; ++s)
        p[s] = static_cast<int>((code >> (16 * s)) & 0xFFFF) - kBias;
    return p;
}

namespace {

struct Step {
    int64_t code;  // packed-arithmetic delta
    Point move;    // the same step in coordinates
};

// Packed-code neighbor deltas. Coordinates sit mid-lane (bias 0x8000), so
// adding a signed per-lane delta to a packed code never corrupts lanes.
const std::vector<Step>& neighbor_steps(int dim, Adjacency adj) {
    static std::vector<Step> cache[5][2];
    auto& slot = cache[dim][adj == Adjacency::LInf ? 0 : 1];
    if (!slot.empty()) return slot;
    auto encode = [&](const Point& delta) {
        int64_t code = 0;
        for (int s = 0; s < dim; ++s)
            code += static_cast<int64_t>(delta[s]) << (16 * s);
        return code;
    };
    if (adj == Adjacency::NearestNeighbor) {
        for (int s = 0; s < dim; ++s)
            for (int dd : {-1, 1}) {
                Point delta(dim, 0);
                delta[s] = dd;
                slot.push_back({encode(delta), delta});
            }
        return slot;
    }
    Point delta(dim, -1);
    for (;;) {
        bool zero = true;
        for (int v : delta)
            if (v != 0) zero = false;
        if (!zero) slot.push_back({encode(delta), delta});
        int axis = dim - 1;
        while (axis >= 0 && delta[axis] == 1) delta[axis--] = -1;
        if (axis < 0) break;
        ++delta[axis];
    }
    return slot;
}

}  // namespace

std::vector<Point> neighbors(const Point& p, Adjacency adj) {
    const int dim = static_cast<int>(p.size());
    std::vector<Point> out;
    int64_t code = pack_point(p);
    for (const Step& st : neighbor_steps(dim, adj))
        out.push_back(unpack_point(code + st.code, dim));
    return out;
}

bool is_connected(const PointSet& s, Adjacency adj) {
    if (s.pts.empty()) return true;
    const auto& steps = neighbor_steps(s.dim, adj);
    std::unordered_set<int64_t> seen;
    std::vector<int64_t> stack{*s.pts.begin()};
    seen.insert(stack.back());
    while (!stack.empty()) {
        int64_t code = stack.back();
        stack.pop_back();
        for (const Step& st : steps) {
            int64_t nb = code + st.code;
            if (s.pts.count(nb) && seen.insert(nb).second) stack.push_back(nb);
        }
    }
    return seen.size() == s.pts.size();
}

namespace {

// Dense box over a point set's surroundings: flat cell indexing plus flood
// fills without hashing on the hot paths.
struct DenseBox {
    int dim;
    Point lo;            // inclusive lower corner
    std::vector<int> ext;
    std::vector<int> stride;
    std::vector<uint8_t> blocked;
    std::vector<uint8_t> mark;

    DenseBox(const PointSet& a, int inflate) : dim(a.dim) {
        lo.assign(dim, 0);
        Point hi(dim, 0);
        bool first = true;
        for (int64_t code : a.pts) {
            Point p = unpack_point(code, dim);
            if (first) {
                lo = hi = p;
                first = false;
                continue;
            }
            for (int s = 0; s < dim; ++s) {
                lo[s] = std::min(lo[s], p[s]);
                hi[s] = std::max(hi[s], p[s]);
            }
        }
        ext.resize(dim);
        stride.resize(dim);
        int total = 1;
        for (int s = 0; s < dim; ++s) {
            lo[s] -= inflate;
            ext[s] = hi[s] - lo[s] + 1 + 2 * inflate;
        }
        for (int s = dim - 1; s >= 0; --s) {
            stride[s] = total;
            total *= ext[s];
        }
        blocked.assign(static_cast<std::size_t>(total), 0);
        mark.assign(static_cast<std::size_t>(total), 0);
        for (int64_t code : a.pts) blocked[index_of_code(code)] = 1;
    }

    int size() const { return static_cast<int>(blocked.size()); }
    int index_of_code(int64_t code) const {
        int idx = 0;
        for (int s = 0; s < dim; ++s) {
            int c = static_cast<int>((code >> (16 * s)) & 0xFFFF) - 0x8000;
            idx += (c - lo[s]) * stride[s];
        }
        return idx;
    }
    bool inside(const Point& p) const {
        for (int s = 0; s < dim; ++s)
            if (p[s] < lo[s] || p[s] >= lo[s] + ext[s]) return false;
        return true;
    }
    Point point_at(int idx) const {
        Point p(dim);
        for (int s = 0; s < dim; ++s) {
            p[s] = lo[s] + idx / stride[s] % ext[s];
        }
        return p;
    }
    bool on_shell(int idx) const {
        for (int s = 0; s < dim; ++s) {
            int c = idx / stride[s] % ext[s];
            if (c == 0 || c == ext[s] - 1) return true;
        }
        return false;
    }
    // index deltas of in-box neighbor steps, with a validity check per axis
    void flood_from_shell(Adjacency adj) {
        std::vector<int> stack;
        for (int idx = 0; idx < size(); ++idx)
            if (on_shell(idx) && !blocked[idx] && !mark[idx]) {
                mark[idx] = 1;
                stack.push_back(idx);
            }
        flood(adj, stack);
    }
    void flood(Adjacency adj, std::vector<int>& stack) {
        std::vector<std::pair<int, Point>> steps;  // index delta + coord step
        for (const Step& st : neighbor_steps(dim, adj)) {
            int idelta = 0;
            for (int s = 0; s < dim; ++s) idelta += st.move[s] * stride[s];
            steps.push_back({idelta, st.move});
        }
        while (!stack.empty()) {
            int idx = stack.back();
            stack.pop_back();
            Point p = point_at(idx);
            for (const auto& [idelta, step] : steps) {
                bool ok = true;
                for (int s = 0; s < dim; ++s) {
                    int c = p[s] + step[s];
                    if (c < lo[s] || c >= lo[s] + ext[s]) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                int nidx = idx + idelta;
                if (!blocked[nidx] && !mark[nidx]) {
                    mark[nidx] = 1;
                    stack.push_back(nidx);
                }
            }
        }
    }
};

}  // namespace

BoundarySets ext_boundary(const PointSet& a, Adjacency path_adj) {
    BoundarySets out;
    out.ext.dim = out.ext_plus.dim = out.ext_star.dim = a.dim;
    if (a.pts.empty()) return out;
    DenseBox box(a, 2);
    box.flood_from_shell(path_adj);
    const int last = a.dim - 1;
    const int64_t up = int64_t{1} << (16 * last);
    const auto& linf = neighbor_steps(a.dim, Adjacency::LInf);
    for (int64_t code : a.pts) {
        for (const Step& st : linf) {
            int64_t vc = code + st.code;
            if (a.pts.count(vc)) continue;
            if (!box.mark[box.index_of_code(vc)]) continue;
            if (!out.ext.pts.insert(vc).second) continue;
            if (a.pts.count(vc + up)) out.ext_star.pts.insert(vc);
        }
    }
    const auto& spatial = neighbor_steps(a.dim - 1, Adjacency::LInf);
    for (int64_t vc : out.ext.pts) {
        // a directed edge from some w in A: w agrees with v up to +-1 in the
        // first d coordinates and sits one layer below
        int64_t below = vc - up;
        bool plus = a.pts.count(below) != 0;
        for (std::size_t i = 0; i < spatial.size() && !plus; ++i)
            plus = a.pts.count(below + spatial[i].code) != 0;
        if (plus) out.ext_plus.pts.insert(vc);
    }
    return out;
}

bool separates_from_infinity(const PointSet& a, const PointSet& s,
                             Adjacency path_adj) {
    if (a.pts.empty()) return true;
    PointSet all;
    all.dim = a.dim;
    for (int64_t c : a.pts) all.pts.insert(c);
    for (int64_t c : s.pts) all.pts.insert(c);
    // flood from A through the complement of S; reaching the shell of the
    // inflated joint box means a path to infinity that avoids S
    DenseBox box(all, 2);
    std::fill(box.blocked.begin(), box.blocked.end(), 0);
    for (int64_t c : s.pts) box.blocked[box.index_of_code(c)] = 1;
    std::vector<int> stack;
    for (int64_t c : a.pts) {
        if (s.pts.count(c)) return false;  // must be disjoint
        int idx = box.index_of_code(c);
        if (!box.mark[idx]) {
            box.mark[idx] = 1;
            stack.push_back(idx);
        }
    }
    box.flood(path_adj, stack);
    for (int idx = 0; idx < box.size(); ++idx)
        if (box.mark[idx] && box.on_shell(idx)) return false;
    return true;
}

BoundaryReport check_exterior_boundary(const PointSet& a, Adjacency conn_adj,
                                       Adjacency path_adj) {
    BoundaryReport rep;
    if (a.pts.empty()) {
        rep.detail = "empty set";
        return rep;
    }
    const int last = a.dim - 1;
    for (int64_t c : a.pts)
        if (unpack_point(c, a.dim)[last] < 0)
            throw std::invalid_argument("set must lie in the upper half-space");
    if (!is_connected(a, Adjacency::LInf))
        throw std::invalid_argument("set must be sup-norm connected");

    BoundarySets b = ext_boundary(a, path_adj);
    rep.ext_size = b.ext.size();
    rep.plus_size = b.ext_plus.size();
    rep.star_size = b.ext_star.size();
    rep.connected = is_connected(b.ext, conn_adj);
    rep.separates = separates_from_infinity(a, b.ext, path_adj);
    rep.card_six = rep.ext_size <= 6 * rep.plus_size;
    rep.card_star = rep.star_size <= rep.plus_size;
    if (!rep.pass()) {
        rep.detail = "failed:";
        if (!rep.connected) rep.detail += " connectivity";
        if (!rep.separates) rep.detail += " separation";
        if (!rep.card_six) rep.detail += " six-bound";
        if (!rep.card_star) rep.detail += " star-bound";
    }
    return rep;
}

bool vertical_transition_balance(const PointSet& a, Adjacency path_adj) {
    if (a.pts.empty()) return true;
    DenseBox box(a, 2);
    box.flood_from_shell(path_adj);
    const int last = a.dim - 1;
    auto in_a = [&](const Point& p) { return a.pts.count(pack_point(p)) != 0; };
    auto unb = [&](const Point& p) {
        return box.inside(p) && box.mark[box.index_of_code(pack_point(p))];
    };
    // iterate over spatial columns of the box
    Point col(a.dim);
    for (int s = 0; s < a.dim; ++s) col[s] = box.lo[s];
    for (;;) {
        int up_in = 0, up_out = 0;
        for (int z = box.lo[last]; z + 1 < box.lo[last] + box.ext[last]; ++z) {
            Point v = col;
            v[last] = z;
            Point w = col;
            w[last] = z + 1;
            if (unb(v) && in_a(w)) ++up_in;
            if (in_a(v) && unb(w)) ++up_out;
        }
        if (up_in != up_out) return false;
        int axis = last - 1;
        while (axis >= 0 && col[axis] == box.lo[axis] + box.ext[axis] - 1)
            col[axis] = box.lo[axis], --axis;
        if (axis < 0) break;
        ++col[axis];
    }
    return true;
}

void for_each_connected_subset(const std::vector<int>& extents, int max_size,
                               const std::function<void(const PointSet&)>& fn) {
    const int dim = static_cast<int>(extents.size());
    std::vector<Point> cells;
    Point cur(dim, 0);
    for (;;) {
        cells.push_back(cur);
        int axis = dim - 1;
        while (axis >= 0 && cur[axis] == extents[axis] - 1) cur[axis--] = 0;
        if (axis < 0) break;
        ++cur[axis];
    }
    const int n = static_cast<int>(cells.size());
    if (n > 63) throw std::invalid_argument("box too large to enumerate");
    // pairwise sup-norm adjacency as bitmasks
    std::vector<uint64_t> adj(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int dist = 0;
            for (int s = 0; s < dim; ++s)
                dist = std::max(dist, std::abs(cells[i][s] - cells[j][s]));
            if (dist <= 1) adj[i] |= uint64_t{1} << j;
        }
    auto connected = [&](uint64_t mask) {
        int first = __builtin_ctzll(mask);
        uint64_t seen = uint64_t{1} << first;
        uint64_t frontier = seen;
        while (frontier) {
            uint64_t next = 0;
            while (frontier) {
                int i = __builtin_ctzll(frontier);
                frontier &= frontier - 1;
                next |= adj[i] & mask & ~seen;
            }
            seen |= next;
            frontier = next;
        }
        return seen == mask;
    };
    std::vector<int> chosen;
    PointSet s;
    s.dim = dim;
    uint64_t mask = 0;
    std::function<void(int)> rec = [&](int start) {
        if (mask && connected(mask)) fn(s);
        if (static_cast<int>(chosen.size()) == max_size) return;
        for (int i = start; i < n; ++i) {
            chosen.push_back(i);
            s.insert(cells[i]);
            mask |= uint64_t{1} << i;
            rec(i + 1);
            mask &= ~(uint64_t{1} << i);
            s.pts.erase(pack_point(cells[i]));
            chosen.pop_back();
        }
    };
    rec(0);
}

PointSet random_connected_halfspace_set(int dim, int size, uint64_t seed,
                                        uint64_t index) {
    PointSet s;
    s.dim = dim;
    Point origin(dim, 0);
    s.insert(origin);
    std::vector<int64_t> frontier;
    auto add_frontier = [&](const Point& p) {
        for (const Point& nb : neighbors(p, Adjacency::LInf)) {
            if (nb[dim - 1] < 0 || s.contains(nb)) continue;
            frontier.push_back(pack_point(nb));
        }
    };
    add_frontier(origin);
    uint64_t ctr = 0;
    while (static_cast<int>(s.size()) < size && !frontier.empty()) {
        uint64_t bits = draw_u64(
            {seed, index, Purpose::ReplicaMix, 0x100000000ull + ctr++});
        std::size_t pick = static_cast<std::size_t>(bits % frontier.size());
        int64_t code = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        if (s.pts.count(code)) continue;
        Point p = unpack_point(code, dim);
        s.pts.insert(code);
        add_frontier(p);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Bottoms and active vertices
// ---------------------------------------------------------------------------

bool good_bottom(const Snapshot& snap, const Site& block_i, int p,
                 double gamma0, double mu_A, const LatticeConfig& lat,
                 const SimConfig& win) {
    lat.validate();
    Region zone = bottom_sites(block_i, p, lat);
    for (int s = 0; s < lat.d; ++s)
        if (zone.lo[s] < -win.L || zone.hi[s] > win.L + 1)
            throw std::invalid_argument(
                "window too small for the requested bottom");
    // per-site counts of non-seed-added particles over the zone
    std::vector<int64_t> ext(lat.d);
    int64_t total = 1;
    for (int s = 0; s < lat.d; ++s) {
        ext[s] = zone.hi[s] - zone.lo[s];
        total *= ext[s];
    }
    std::vector<int32_t> counts(static_cast<std::size_t>(total), 0);
    auto flat = [&](const Site& x) {
        int64_t f = 0;
        for (int s = 0; s < lat.d; ++s) f = f * ext[s] + (x[s] - zone.lo[s]);
        return f;
    };
    for (const SnapshotParticle& sp : snap.particles) {
        if (sp.seed_added) continue;
        if (!zone.contains_site(sp.site)) continue;
        ++counts[static_cast<std::size_t>(flat(sp.site))];
    }
    int64_t c0p = 1;
    for (int i = 0; i < p; ++i) c0p *= lat.C0;
    double needed = gamma0 * mu_A;
    for (int i = 0; i < lat.d; ++i) needed *= static_cast<double>(c0p);
    // sliding cube sums via d-dimensional prefix sums
    std::vector<int64_t> pref(static_cast<std::size_t>(total), 0);
    // build prefix sums axis by axis
    for (std::size_t i = 0; i < counts.size(); ++i) pref[i] = counts[i];
    for (int axis = lat.d - 1, stride = 1; axis >= 0; --axis) {
        int64_t len = ext[axis];
        int64_t outer = total / (len * stride);
        for (int64_t o = 0; o < outer; ++o)
            for (int64_t j = 1; j < len; ++j)
                for (int64_t inr = 0; inr < stride; ++inr) {
                    int64_t base = o * len * stride;
                    pref[base + j * stride + inr] +=
                        pref[base + (j - 1) * stride + inr];
                }
        stride *= len;
    }
    auto pref_at = [&](const std::vector<int64_t>& c) -> int64_t {
        // c holds inclusive upper corners per axis (-1 means empty)
        int64_t f = 0;
        for (int s = 0; s < lat.d; ++s) {
            if (c[s] < 0) return 0;
            f = f * ext[s] + c[s];
        }
        return pref[static_cast<std::size_t>(f)];
    };
    // iterate all aligned-or-not cube corners inside the zone
    std::vector<int64_t> corner(lat.d);
    for (int s = 0; s < lat.d; ++s) corner[s] = 0;
    for (;;) {
        bool fits = true;
        for (int s = 0; s < lat.d; ++s)
            if (corner[s] + c0p > ext[s]) fits = false;
        if (fits) {
            // inclusion-exclusion over the cube corners
            int64_t sum = 0;
            for (int mask = 0; mask < (1 << lat.d); ++mask) {
                std::vector<int64_t> c(lat.d);
                int sign = 1;
                for (int s = 0; s < lat.d; ++s) {
                    if (mask & (1 << s)) {
                        c[s] = corner[s] - 1;
                        sign = -sign;
                    } else {
                        c[s] = corner[s] + c0p - 1;
                    }
                }
                sum += sign * pref_at(c);
            }
            if (static_cast<double>(sum) < needed) return false;
        }
        int axis = lat.d - 1;
        while (axis >= 0 && corner[axis] == ext[axis] - 1) corner[axis--] = 0;
        if (axis < 0) break;
        ++corner[axis];
    }
    return true;
}

bool is_active(const Snapshot& snap, const Site& block_i, int p,
               const LatticeConfig& lat) {
    Site m = midpoint(block_i, p, lat);
    const int radius = static_cast<int>(lat.side(p) / 8);
    for (const SnapshotParticle& sp : snap.particles) {
        if (sp.type != PType::B) continue;
        Site rel(lat.d);
        for (int s = 0; s < lat.d; ++s) rel[s] = sp.site[s] - m[s];
        if (cube_contains(radius, rel)) return true;
    }
    return false;
}

std::optional<Site> x_of(const Snapshot& snap, const Site& block_i, int p,
                         const LatticeConfig& lat) {
    Site m = midpoint(block_i, p, lat);
    std::optional<Site> best;
    int best_dist = 0;
    for (const SnapshotParticle& sp : snap.particles) {
        if (sp.type != PType::B) continue;
        Site rel(lat.d);
        for (int s = 0; s < lat.d; ++s) rel[s] = sp.site[s] - m[s];
        int dist = linf_norm(rel);
        if (!best || dist < best_dist ||
            (dist == best_dist && sp.site < *best)) {
            best = sp.site;
            best_dist = dist;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Reset process
// ---------------------------------------------------------------------------

ResetProcess::ResetProcess(const LoggedRun& run, const Snapshot& at_t0,
                           const Region& zone, const Site& x, double t0,
                           double t1)
    : d_(run.cfg.d) {
    std::unordered_map<uint32_t, int> idx_to_member;
    int at_x_any = -1, at_x_b = -1;
    const int64_t x_code = pack_site(x);
    for (const SnapshotParticle& sp : at_t0.particles) {
        if (!zone.contains_site(sp.site)) continue;
        Member m;
        m.pid = sp.pid;
        m.run_idx = sp.idx;
        m.pos = pack_site(sp.site);
        m.is_b = false;
        int mi = static_cast<int>(members_.size());
        members_.push_back(m);
        idx_to_member[sp.idx] = mi;
        if (m.pos == x_code) {
            if (at_x_any < 0 || sp.pid < members_[at_x_any].pid) at_x_any = mi;
            if (sp.type == PType::B &&
                (at_x_b < 0 || sp.pid < members_[at_x_b].pid))
                at_x_b = mi;
        }
    }
    seed_member_ = at_x_b >= 0 ? at_x_b : at_x_any;
    if (seed_member_ < 0)
        throw std::invalid_argument("reset start site is unoccupied");
    members_[seed_member_].is_b = true;
    members_[seed_member_].onset = t0;
    seed_pid_ = members_[seed_member_].pid;

    // occupancy among members only
    std::unordered_map<int64_t, std::vector<int>> occ;
    for (int mi = 0; mi < static_cast<int>(members_.size()); ++mi)
        occ[members_[mi].pos].push_back(mi);

    for (const Event& e : run.events) {
        if (e.time <= t0) continue;
        if (e.time > t1) break;
        if (e.kind != EventKind::Jump) continue;
        auto it = idx_to_member.find(e.actor);
        if (it == idx_to_member.end()) continue;
        int mi = it->second;
        Member& m = members_[mi];
        if (e.to != e.from) {
            auto& src = occ[m.pos];
            src.erase(std::find(src.begin(), src.end(), mi));
            m.pos = e.to;
            occ[m.pos].push_back(mi);
        }
        auto& dst = occ[m.pos];
        if (m.is_b) {
            for (int oj : dst) {
                Member& o = members_[oj];
                if (o.is_b) continue;
                o.is_b = true;
                o.onset = e.time;
                o.parent = mi;
            }
        } else {
            int inf = -1;
            for (int oj : dst) {
                if (oj == mi || !members_[oj].is_b) continue;
                if (inf < 0 || members_[oj].pid < members_[inf].pid) inf = oj;
            }
            if (inf >= 0) {
                m.is_b = true;
                m.onset = e.time;
                m.parent = inf;
            }
        }
    }
}

bool ResetProcess::b_in_cube_at_end(const Site& center, int radius) const {
    for (const Member& m : members_) {
        if (!m.is_b) continue;
        Site pos = unpack_site(m.pos, d_);
        Site rel(d_);
        for (int s = 0; s < d_; ++s) rel[s] = pos[s] - center[s];
        if (cube_contains(radius, rel)) return true;
    }
    return false;
}

std::optional<Witness> ResetProcess::first_witness(const Site& center,
                                                   int radius) const {
    std::optional<Witness> best;
    for (int mi = 0; mi < static_cast<int>(members_.size()); ++mi) {
        const Member& m = members_[mi];
        if (!m.is_b) continue;
        Site pos = unpack_site(m.pos, d_);
        Site rel(d_);
        for (int s = 0; s < d_; ++s) rel[s] = pos[s] - center[s];
        if (!cube_contains(radius, rel)) continue;
        Witness w;
        int cur = mi;
        while (cur != seed_member_) {
            w.times.push_back(members_[cur].onset);
            w.pids.push_back(members_[cur].pid);
            cur = members_[cur].parent;
        }
        w.pids.push_back(seed_pid_);
        std::reverse(w.times.begin(), w.times.end());
        std::reverse(w.pids.begin(), w.pids.end());
        auto better = [](const Witness& a, const Witness& b) {
            if (a.times.size() != b.times.size())
                return a.times.size() < b.times.size();
            if (a.times != b.times) return a.times < b.times;
            return a.pids < b.pids;
        };
        if (!best || better(w, *best)) best = std::move(w);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Edge certificates
// ---------------------------------------------------------------------------

EdgeCertificate check_edge_open(const LoggedRun& run, const Snapshot& snap_k,
                                const Site& parent_i, int64_t k,
                                const Site& child_j, int p,
                                const LatticeConfig& lat,
                                bool parent_active_by_convention) {
    Site diff(lat.d);
    for (int s = 0; s < lat.d; ++s) diff[s] = parent_i[s] - child_j[s];
    if (linf_norm(diff) > 1)
        throw std::invalid_argument("not a directed block edge");

    EdgeCertificate cert;
    const int radius = static_cast<int>(lat.side(p) / 8);
    cert.parent_active = parent_active_by_convention ||
                         is_active(snap_k, parent_i, p, lat);
    if (!cert.parent_active) {
        cert.failed_clause = "parent not active";
        return cert;
    }
    cert.x = parent_active_by_convention
                 ? std::optional<Site>(midpoint(parent_i, p, lat))
                 : x_of(snap_k, parent_i, p, lat);
    if (!cert.x) {
        cert.failed_clause = "no start site";
        return cert;
    }
    const double t0 = static_cast<double>(t_of(k, p, lat));
    const double t1 = static_cast<double>(t_of(k + 1, p, lat));
    Region zone = bottom_sites(parent_i, p, lat);
    ResetProcess reset(run, snap_k, zone, *cert.x, t0, t1);
    Site child_m = midpoint(child_j, p, lat);
    cert.transmission = reset.b_in_cube_at_end(child_m, radius);
    if (!cert.transmission) {
        cert.failed_clause = "transmission";
        return cert;
    }
    cert.witness = reset.first_witness(child_m, radius);

    // No carrier may have a potential recuperation time inside its segment.
    const double ref = run.cfg.clock_rate_ref();
    const double lam = run.cfg.effective_lambda();
    cert.no_recuperation = true;
    const Witness& w = *cert.witness;
    for (std::size_t i = 0; i < w.pids.size(); ++i) {
        double a = i == 0 ? t0 : w.times[i - 1];
        double b = i < w.times.size() ? w.times[i] : t1;
        ClockParams cp{run.cfg.seed, w.pids[i], ref,
                       ref > 0.0 ? lam / ref : 0.0};
        if (has_tick_in(cp, a, b)) {
            cert.no_recuperation = false;
            cert.failed_clause = "recuperation inside a witness segment";
            break;
        }
    }
    cert.open = cert.parent_active && cert.transmission && cert.no_recuperation;
    return cert;
}

// ---------------------------------------------------------------------------
// Cluster / barrier / covering
// ---------------------------------------------------------------------------

PointSet open_cluster(const std::vector<Point>& seeds, const EdgeOracle& open,
                      int max_layer) {
    PointSet cluster;
    if (seeds.empty()) return cluster;
    cluster.dim = static_cast<int>(seeds[0].size());
    std::deque<Point> q;
    for (const Point& s : seeds) {
        if (!cluster.contains(s)) {
            cluster.insert(s);
            q.push_back(s);
        }
    }
    const int dim = cluster.dim;
    while (!q.empty()) {
        Point v = q.front();
        q.pop_front();
        if (v[dim - 1] >= max_layer) continue;
        // children: spatial offset up to 1 in sup-norm, layer + 1
        Point delta(dim - 1, -1);
        for (;;) {
            Point child = v;
            for (int s = 0; s < dim - 1; ++s) child[s] += delta[s];
            child[dim - 1] += 1;
            if (!cluster.contains(child) && open(v, child)) {
                cluster.insert(child);
                q.push_back(child);
            }
            int axis = dim - 2;
            while (axis >= 0 && delta[axis] == 1) delta[axis--] = -1;
            if (axis < 0) break;
            ++delta[axis];
        }
    }
    return cluster;
}

bool is_barrier(const PointSet& s, const PointSet& c0,
                const std::function<bool(const Point&)>& flag,
                Adjacency conn_adj, Adjacency path_adj) {
    for (int64_t c : c0.pts)
        if (s.pts.count(c)) return false;
    if (!is_connected(s, conn_adj)) return false;
    if (!separates_from_infinity(c0, s, path_adj)) return false;
    std::size_t flagged = 0;
    for (int64_t c : s.pts)
        if (flag(unpack_point(c, s.dim))) ++flagged;
    return 6 * flagged >= s.size();
}

CoveringResult covering_set(const PointSet& s, int p, int r, int nu,
                            const LatticeConfig& lat) {
    if (r < p) throw std::invalid_argument("need r >= p");
    if (nu < 1) throw std::invalid_argument("need nu >= 1");
    if (s.pts.empty()) throw std::invalid_argument("empty set");
    if (!is_connected(s, Adjacency::LInf))
        throw std::invalid_argument("set must be connected");
    const int d = lat.d;
    const int dim = d + 1;
    if (s.dim != dim) throw std::invalid_argument("set dimension mismatch");
    const int64_t side_p = lat.side(p);
    const int64_t side_r = lat.side(r);
    int64_t pq = 1;
    for (int i = 0; i < lat.q(); ++i) pq *= p;

    // spanning-tree doubling walk visiting all vertices, length <= 2n-2
    std::vector<int64_t> order(s.pts.begin(), s.pts.end());
    std::sort(order.begin(), order.end());
    std::unordered_map<int64_t, int> index;
    for (std::size_t i = 0; i < order.size(); ++i)
        index[order[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> tree(order.size());
    {
        std::vector<uint8_t> seen(order.size(), 0);
        std::deque<int> q{0};
        seen[0] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            Point pu = unpack_point(order[u], dim);
            for (const Point& nb : neighbors(pu, Adjacency::LInf)) {
                auto it = index.find(pack_point(nb));
                if (it == index.end() || seen[it->second]) continue;
                seen[it->second] = 1;
                tree[u].push_back(it->second);
                q.push_back(it->second);
            }
        }
    }
    std::vector<int> walk;
    {
        // iterative preorder with explicit backtracking
        std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
        walk.push_back(0);
        while (!stack.empty()) {
            auto& [u, ci] = stack.back();
            if (ci < tree[u].size()) {
                int v = tree[u][ci++];
                walk.push_back(v);
                stack.push_back({v, 0});
            } else {
                stack.pop_back();
                if (!stack.empty()) walk.push_back(stack.back().first);
            }
        }
    }
    const int64_t mu = static_cast<int64_t>(nu) * (side_r / side_p);
    const int64_t denom = static_cast<int64_t>(nu) * side_r;
    auto floor_div = [](int64_t a, int64_t b) {
        int64_t qt = a / b;
        if ((a % b) != 0 && ((a < 0) != (b < 0))) --qt;
        return qt;
    };
    CoveringResult res;
    res.lambda.dim = dim;
    std::vector<Point> centers;
    for (std::size_t j = 0; j * mu < walk.size(); ++j) {
        Point v = unpack_point(order[walk[j * mu]], dim);
        Point c(dim);
        for (int sx = 0; sx < d; ++sx)
            c[sx] = static_cast<int>(floor_div(v[sx] * side_p, denom));
        c[d] = static_cast<int>(floor_div(v[d] * pq * side_p, denom));
        centers.push_back(c);
    }
    const int spate = 4 * d + 2;
    const int64_t tpad = 3 * pq;
    for (const Point& c : centers) {
        Point cur(dim);
        for (int sx = 0; sx < d; ++sx) cur[sx] = c[sx] - spate;
        cur[d] = c[d] - static_cast<int>(tpad);
        for (;;) {
            res.lambda.insert(cur);
            int axis = dim - 1;
            for (;;) {
                int hi = axis < d ? c[axis] + spate
                                  : c[axis] + static_cast<int>(tpad);
                if (axis >= 0 && cur[axis] == hi) {
                    cur[axis] = axis < d ? c[axis] - spate
                                         : c[axis] - static_cast<int>(tpad);
                    --axis;
                } else {
                    break;
                }
            }
            if (axis < 0) break;
            ++cur[axis];
        }
    }
    res.size = res.lambda.size();
    res.connected = is_connected(res.lambda, Adjacency::NearestNeighbor);

    // covering of every lattice point of the nearby blocks
    res.covers = true;
    for (int64_t code : s.pts) {
        Point v = unpack_point(code, dim);
        const int64_t k = v[d] - 1;
        Point off(d, -(4 * d - 1));
        for (;;) {
            int axis;
            // lattice points of the block at column v + off, layer k
            std::vector<int64_t> blo(dim), bhi(dim);
            for (int sx = 0; sx < d; ++sx) {
                int64_t base = (static_cast<int64_t>(v[sx]) + off[sx]) * side_p;
                blo[sx] = base;
                bhi[sx] = base + side_p - 1;
            }
            blo[d] = k * pq * side_p;
            bhi[d] = (k + 1) * pq * side_p - 1;
            std::vector<int64_t> pt(blo);
            for (;;) {
                Point cell(dim);
                for (int sx = 0; sx < dim; ++sx)
                    cell[sx] = static_cast<int>(floor_div(pt[sx], denom));
                if (!res.lambda.contains(cell)) {
                    res.covers = false;
                    break;
                }
                int ax = dim - 1;
                while (ax >= 0 && pt[ax] == bhi[ax]) pt[ax] = blo[ax], --ax;
                if (ax < 0) break;
                ++pt[ax];
            }
            if (!res.covers) break;
            axis = d - 1;
            while (axis >= 0 && off[axis] == 4 * d - 1) off[axis--] = -(4 * d - 1);
            if (axis < 0) break;
            ++off[axis];
        }
        if (!res.covers) break;
    }

    double k18 = 2.0 * std::pow(8.0 * d + 5.0, d) * 7.0;
    res.bound = k18 *
                (static_cast<double>(s.size()) * side_p / (nu * side_r) + 1.0) *
                static_cast<double>(pq);
    res.card_ok = static_cast<double>(res.size) <= res.bound;
    return res;
}

// ---------------------------------------------------------------------------
// Block certification experiment
// ---------------------------------------------------------------------------

BlockExperimentResult run_block_experiment(const SimConfig& sim, int layers,
                                           int column_radius) {
    SimConfig cfg = sim;
    cfg.seed_mode = SeedMode::OneAtMidpoint;
    LatticeConfig lat{cfg.d, cfg.C0};
    const double horizon = static_cast<double>(t_of(layers, cfg.p, lat));
    if (cfg.T < horizon) cfg.T = horizon;
    cfg.validate();

    LoggedRun run;
    run.cfg = cfg;
    run.census = build_census(cfg);
    Engine eng(cfg, run.census);
    std::vector<Snapshot> snaps;
    for (int k = 0; k <= layers; ++k) {
        eng.run_to(static_cast<double>(t_of(k, cfg.p, lat)), &run.events,
                   nullptr);
        snaps.push_back(eng.snapshot());
    }

    BlockExperimentResult res;
    const Site origin(cfg.d, 0);
    for (int k = 0; k < layers; ++k) {
        // candidate parents within the column radius whose bottom fits the
        // window
        Site i_cur(cfg.d, -column_radius);
        for (;;) {
            bool fits = true;
            Region zone = bottom_sites(i_cur, cfg.p, lat);
            for (int s = 0; s < cfg.d; ++s)
                if (zone.lo[s] < -cfg.L || zone.hi[s] > cfg.L + 1) fits = false;
            if (fits) {
                bool convention = (k == 0 && i_cur == origin);
                bool active =
                    convention || is_active(snaps[k], i_cur, cfg.p, lat);
                if (active) {
                    ++res.active_vertices;
                    Site j_cur(cfg.d);
                    Site delta(cfg.d, -1);
                    for (;;) {
                        for (int s = 0; s < cfg.d; ++s)
                            j_cur[s] = i_cur[s] + delta[s];
                        bool child_fits = true;
                        Region czone = bottom_sites(j_cur, cfg.p, lat);
                        for (int s = 0; s < cfg.d; ++s)
                            if (czone.lo[s] < -cfg.L ||
                                czone.hi[s] > cfg.L + 1)
                                child_fits = false;
                        if (child_fits) {
                            ++res.edges_tested;
                            EdgeCertificate cert = check_edge_open(
                                run, snaps[k], i_cur, k, j_cur, cfg.p, lat,
                                convention);
                            if (cert.open) {
                                ++res.edges_open;
                                if (!is_active(snaps[k + 1], j_cur, cfg.p, lat))
                                    ++res.propagation_violations;
                            }
                        }
                        int axis = cfg.d - 1;
                        while (axis >= 0 && delta[axis] == 1) delta[axis--] = -1;
                        if (axis < 0) break;
                        ++delta[axis];
                    }
                }
            }
            int axis = cfg.d - 1;
            while (axis >= 0 && i_cur[axis] == column_radius)
                i_cur[axis--] = -column_radius;
            if (axis < 0) break;
            ++i_cur[axis];
        }
    }
    return res;
}

}  // namespace abrw
