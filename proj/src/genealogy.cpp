#include "abrw/genealogy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace abrw {

RunAnalysis::RunAnalysis(const LoggedRun& run) : run_(&run) {
    const std::size_t n = run.census.size();
    spells_.resize(n);
    jumps_.resize(n);
    start_pos_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        start_pos_[i] = pack_site(run.census[i].site);
        if (run.census[i].type == PType::B)
            spells_[i].push_back({0.0, kInfTime, kNoInfector});
    }
    for (const Event& e : run.events) {
        switch (e.kind) {
            case EventKind::Jump:
                jumps_[e.actor].push_back({e.time, e.from, e.to});
                break;
            case EventKind::Infection:
                if (!spells_[e.target].empty() &&
                    spells_[e.target].back().end == kInfTime)
                    throw std::runtime_error("infection of a B-particle");
                spells_[e.target].push_back({e.time, kInfTime, e.actor});
                break;
            case EventKind::Recovery: {
                auto& sp = spells_[e.actor];
                if (sp.empty() || sp.back().end != kInfTime)
                    throw std::runtime_error("recovery without a B-spell");
                sp.back().end = e.time;
                break;
            }
            case EventKind::Tick:
                break;
        }
    }
}

const Spell* RunAnalysis::spell_covering(uint32_t idx, double t) const {
    const auto& sp = spells_[idx];
    // spells are few per particle; linear scan from the back
    for (auto it = sp.rbegin(); it != sp.rend(); ++it)
        if (it->start <= t && t < it->end) return &*it;
    return nullptr;
}

bool RunAnalysis::is_b_at(uint32_t idx, double t) const {
    return spell_covering(idx, t) != nullptr;
}

int64_t RunAnalysis::position_at(uint32_t idx, double t) const {
    const auto& js = jumps_[idx];
    int64_t pos = start_pos_[idx];
    // last jump with time <= t
    std::size_t lo = 0, hi = js.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (js[mid].time <= t) lo = mid + 1;
        else hi = mid;
    }
    if (lo > 0) pos = js[lo - 1].to;
    return pos;
}

std::vector<uint32_t> RunAnalysis::b_particles_at(double t) const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < spells_.size(); ++i)
        if (is_b_at(i, t)) out.push_back(i);
    return out;
}

GenealogicalPath RunAnalysis::reconstruct(uint32_t idx, double s) const {
    GenealogicalPath path;
    path.terminal_time = s;
    std::vector<double> times;
    std::vector<uint32_t> carriers;
    uint32_t cur = idx;
    double t = s;
    for (;;) {
        const Spell* sp = spell_covering(cur, t);
        if (!sp)
            throw std::runtime_error(
                "B-particle without infection provenance in the log");
        carriers.push_back(cur);
        if (sp->start == 0.0) break;  // B from time 0
        times.push_back(sp->start);
        cur = sp->infector;
        t = sp->start;
        if (carriers.size() > spells_.size() * 4 + 8)
            throw std::runtime_error("genealogy reconstruction cycle");
    }
    std::reverse(carriers.begin(), carriers.end());
    std::reverse(times.begin(), times.end());
    path.carriers = std::move(carriers);
    path.switch_times = std::move(times);
    return path;
}

bool RunAnalysis::validate(const GenealogicalPath& path,
                           std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (path.carriers.empty()) return fail("empty carrier chain");
    if (path.switch_times.size() + 1 != path.carriers.size())
        return fail("times/carriers length mismatch");
    const std::size_t l = path.switch_times.size();
    for (std::size_t i = 0; i + 1 < l; ++i)
        if (!(path.switch_times[i] < path.switch_times[i + 1]))
            return fail("switch times not increasing");
    if (l > 0 && !(path.switch_times.back() <= path.terminal_time))
        return fail("switch after terminal time");
    // carrier 0 is B from time 0
    const Spell* sp0 = spell_covering(path.carriers[0], 0.0);
    if (!sp0) return fail("first carrier not B at time 0");
    for (std::size_t i = 0; i < path.carriers.size(); ++i) {
        double si = i == 0 ? 0.0 : path.switch_times[i - 1];
        double si1 = i < l ? path.switch_times[i] : path.terminal_time;
        const Spell* sp = spell_covering(path.carriers[i], si);
        if (!sp) return fail("carrier not B at its switch time");
        if (!(sp->end > si1))
            return fail("carrier recovers inside its segment");
        if (i == 0) continue;
        // co-location at si, with a jump by one of the pair at si
        uint32_t a = path.carriers[i - 1], b = path.carriers[i];
        if (position_at(a, si) != position_at(b, si))
            return fail("carriers not co-located at hand-over");
        auto jumped_at = [&](uint32_t p) {
            const auto& js = jumps_[p];
            auto it = std::lower_bound(
                js.begin(), js.end(), si,
                [](const JumpRec& r, double v) { return r.time < v; });
            return it != js.end() && it->time == si;
        };
        if (!jumped_at(a) && !jumped_at(b))
            return fail("no jump at the hand-over time");
    }
    return true;
}

// ---------------------------------------------------------------------------
// J-path dynamic program
// ---------------------------------------------------------------------------

JPathValues max_jumps_values(const LoggedRun& run, const Site& x, double t,
                             bool include_seed_added) {
    const std::size_t n = run.census.size();
    JPathValues res;
    res.value.assign(n, -1);
    std::vector<int64_t> pos(n);
    std::unordered_map<int64_t, std::vector<uint32_t>> occ;
    const int64_t x_code = pack_site(x);
    auto eligible = [&](uint32_t i) {
        return include_seed_added || !run.census[i].seed_added;
    };
    for (uint32_t i = 0; i < n; ++i) {
        pos[i] = pack_site(run.census[i].site);
        if (!eligible(i)) continue;
        occ[pos[i]].push_back(i);
        if (pos[i] == x_code) res.value[i] = 0;
    }
    if (occ.find(x_code) == occ.end() || occ[x_code].empty()) {
        res.best = 0;  // x unoccupied at time 0
        return res;
    }
    for (const Event& e : run.events) {
        if (e.time > t) break;
        if (e.kind != EventKind::Jump) continue;
        uint32_t i = e.actor;
        if (!eligible(i)) continue;
        if (e.to != e.from) {
            auto& src = occ[pos[i]];
            src.erase(std::find(src.begin(), src.end(), i));
            pos[i] = e.to;
            occ[pos[i]].push_back(i);
        }
        if (res.value[i] >= 0) ++res.value[i];
        auto& dst = occ[pos[i]];
        int64_t m = -1;
        for (uint32_t j : dst) m = std::max(m, res.value[j]);
        if (m >= 0)
            for (uint32_t j : dst) res.value[j] = m;
    }
    res.best = 0;
    for (uint32_t i = 0; i < n; ++i) res.best = std::max(res.best, res.value[i]);
    return res;
}

int64_t max_jumps(const LoggedRun& run, const Site& x, double t,
                  bool include_seed_added) {
    return max_jumps_values(run, x, t, include_seed_added).best;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle
// ---------------------------------------------------------------------------

namespace {

struct BruteState {
    std::vector<int64_t> pos;
    std::vector<std::pair<uint32_t, int64_t>> jumps;  // (actor, to)
    std::vector<int64_t> jump_from;
    std::vector<uint8_t> eligible;

    int64_t go(std::size_t ev, uint32_t horse) {
        if (ev == jumps.size()) return 0;
        int64_t best = 0;
        const int64_t here = pos[horse];
        // switch to any eligible co-located particle, then see the event out
        for (uint32_t h = 0; h < pos.size(); ++h) {
            if (!eligible[h] || pos[h] != here) continue;
            const auto [actor, to] = jumps[ev];
            int64_t save = pos[actor];
            pos[actor] = to;
            int64_t r = (actor == h ? 1 : 0) + go(ev + 1, h);
            pos[actor] = save;
            best = std::max(best, r);
        }
        return best;
    }
};

}  // namespace

JumpFunctionalTracker::JumpFunctionalTracker(const Engine& engine,
                                             const Site& x,
                                             bool include_seed_added) {
    const int n = engine.n_particles();
    value_.assign(n, -1);
    eligible_.assign(n, 1);
    const int64_t x_code = pack_site(x);
    for (int i = 0; i < n; ++i) {
        uint32_t idx = static_cast<uint32_t>(i);
        if (!include_seed_added && engine.seed_added(idx)) {
            eligible_[i] = 0;
            continue;
        }
        if (engine.packed_position(idx) == x_code) {
            value_[i] = 0;
            best_ = 0;
        }
    }
}

void JumpFunctionalTracker::on_event(const Engine& engine, const Event& ev) {
    if (ev.kind != EventKind::Jump || !eligible_[ev.actor]) return;
    if (value_[ev.actor] >= 0) {
        ++value_[ev.actor];
        best_ = std::max(best_, value_[ev.actor]);
    }
    const auto& occ = engine.occupants(ev.to);
    int64_t m = -1;
    for (uint32_t j : occ)
        if (eligible_[j]) m = std::max(m, value_[j]);
    if (m >= 0)
        for (uint32_t j : occ)
            if (eligible_[j]) value_[j] = m;
}

int64_t brute_force_jpaths(const LoggedRun& run, const Site& x, double t,
                           bool include_seed_added, std::size_t max_events) {
    BruteState st;
    const std::size_t n = run.census.size();
    st.pos.resize(n);
    st.eligible.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
        st.pos[i] = pack_site(run.census[i].site);
        st.eligible[i] = include_seed_added || !run.census[i].seed_added;
    }
    for (const Event& e : run.events) {
        if (e.time > t) break;
        if (e.kind != EventKind::Jump || !st.eligible[e.actor]) continue;
        st.jumps.push_back({e.actor, e.to});
    }
    if (st.jumps.size() > max_events)
        throw std::invalid_argument("instance above the enumeration budget");
    const int64_t x_code = pack_site(x);
    int64_t best = -1;
    for (uint32_t i = 0; i < n; ++i)
        if (st.eligible[i] && st.pos[i] == x_code)
            best = std::max(best, st.go(0, i));
    return best < 0 ? 0 : best;  // unoccupied start gives 0
}

}  // namespace abrw
