#include "abrw/couplings.hpp"

#include <algorithm>
#include <unordered_set>

namespace abrw {

namespace {

// Lockstep driver. Runs both engines through the merged event-time sequence;
// after every fully processed timestamp it evaluates the inclusion predicate
// on each particle whose type may have changed, and checks that shared
// particles performed identical jumps.
struct Lockstep {
    Engine& e1;
    Engine& e2;
    DominanceReport rep;

    // pred(b1, b2) must hold for every shared particle; b = "is type B".
    template <typename Pred>
    void run(double t_end, Pred pred) {
        std::vector<Event> buf1, buf2;
        // initial inclusion over the full population
        check_all(pred, 0.0);
        for (;;) {
            double t1 = e1.next_event_time();
            double t2 = e2.next_event_time();
            double t = std::min(t1, t2);
            if (t > t_end || t == kInfTime) break;
            buf1.clear();
            buf2.clear();
            while (e1.next_event_time() == t) e1.step(buf1);
            while (e2.next_event_time() == t) e2.step(buf2);
            ++rep.event_times_checked;
            compare_jumps(buf1, buf2, t);
            if (!rep.pass) return;
            check_changed(buf1, buf2, pred, t);
            if (!rep.pass) return;
        }
    }

    void violation(double t, uint64_t pid, const std::string& what) {
        if (!rep.pass) return;
        rep.pass = false;
        rep.first_violation = CoupleViolation{t, pid, what};
    }

    void compare_jumps(const std::vector<Event>& b1,
                       const std::vector<Event>& b2, double t) {
        // every jump of a shared particle must appear identically in both
        auto collect = [](const std::vector<Event>& buf, const Engine& e) {
            std::vector<std::tuple<uint64_t, int64_t, int64_t>> v;
            for (const Event& ev : buf)
                if (ev.kind == EventKind::Jump)
                    v.push_back({e.pid(ev.actor), ev.from, ev.to});
            std::sort(v.begin(), v.end());
            return v;
        };
        auto j1 = collect(b1, e1);
        auto j2 = collect(b2, e2);
        // restrict run2's jumps to particles present in run1
        std::vector<std::tuple<uint64_t, int64_t, int64_t>> j2s;
        for (const auto& rec : j2)
            if (e1.index_of(std::get<0>(rec))) j2s.push_back(rec);
        if (j1 != j2s) {
            uint64_t pid = 0;
            if (!j1.empty()) pid = std::get<0>(j1[0]);
            else if (!j2s.empty()) pid = std::get<0>(j2s[0]);
            violation(t, pid, "shared particles performed different jumps");
        }
    }

    template <typename Pred>
    void check_changed(const std::vector<Event>& b1,
                       const std::vector<Event>& b2, Pred pred, double t) {
        std::unordered_set<uint64_t> pids;
        auto add = [&](const std::vector<Event>& buf, const Engine& e) {
            for (const Event& ev : buf) {
                if (ev.kind == EventKind::Infection)
                    pids.insert(e.pid(ev.target));
                else if (ev.kind == EventKind::Recovery)
                    pids.insert(e.pid(ev.actor));
            }
        };
        add(b1, e1);
        add(b2, e2);
        for (uint64_t pid : pids) check_one(pid, pred, t);
    }

    template <typename Pred>
    void check_one(uint64_t pid, Pred pred, double t) {
        auto i1 = e1.index_of(pid);
        auto i2 = e2.index_of(pid);
        if (!i2) {
            violation(t, pid, "particle missing from the larger run");
            return;
        }
        ++rep.inclusion_checks;
        bool b1 = i1 && e1.type(*i1) == PType::B;
        bool b2 = e2.type(*i2) == PType::B;
        if (!pred(b1, b2, static_cast<bool>(i1)))
            violation(t, pid, "B-set inclusion violated");
    }

    template <typename Pred>
    void check_all(Pred pred, double t) {
        for (int i = 0; i < e1.n_particles(); ++i)
            check_one(e1.pid(static_cast<uint32_t>(i)), pred, t);
        for (int i = 0; i < e2.n_particles(); ++i)
            check_one(e2.pid(static_cast<uint32_t>(i)), pred, t);
    }
};

}  // namespace

DominanceReport couple_rate(const SimConfig& base, double rate1, double rate2) {
    if (rate1 > rate2)
        throw std::invalid_argument("need rate1 <= rate2 for thinning");
    SimConfig c1 = base, c2 = base;
    c1.lambda = rate1;
    c2.lambda = rate2;
    c1.lambda_ref = c2.lambda_ref = rate2 > 0.0 ? rate2 : -1.0;
    c1.variant = c2.variant = Variant::Standard;
    Census census = build_census(c2);
    Engine e1(c1, census), e2(c2, census);
    Lockstep ls{e1, e2, {}};
    // B under the larger rate implies B under the smaller one
    ls.run(base.T, [](bool b1, bool b2, bool) { return !b2 || b1; });
    // here "run1" is the small-rate process: predicate receives (b1, b2) as
    // (small rate, large rate), so the check above is b2 => b1
    return ls.rep;
}

DominanceReport couple_no_recuperation(const SimConfig& cfg) {
    SimConfig c1 = cfg, c2 = cfg;
    c1.variant = Variant::Standard;
    c2.variant = Variant::InstantNoRecup;
    Census census = build_census(c1);
    Engine e1(c1, census), e2(c2, census);
    Lockstep ls{e1, e2, {}};
    // B in the recuperation process implies B in the dominating process
    ls.run(cfg.T, [](bool b1, bool b2, bool) { return !b1 || b2; });
    return ls.rep;
}

DominanceReport couple_initial(const SimConfig& cfg, double removal_fraction,
                               uint64_t salt) {
    Census census2 = build_census(cfg);
    Census census1;
    for (const CensusEntry& e : census2) {
        if (!e.seed_added) {
            double u = uniform01(
                draw_u64({cfg.seed, e.pid, Purpose::ReplicaMix, salt}));
            if (u < removal_fraction) continue;
        }
        census1.push_back(e);
    }
    Engine e1(cfg, census1), e2(cfg, census2);
    Lockstep ls{e1, e2, {}};
    // presence is checked inside check_one; B in the small run implies B in
    // the large one
    ls.run(cfg.T, [](bool b1, bool b2, bool present1) {
        return !present1 || !b1 || b2;
    });
    return ls.rep;
}

}  // namespace abrw
