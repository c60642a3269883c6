// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and scales are pinned here, in code.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "abrw/couplings.hpp"
#include "abrw/engine.hpp"
#include "abrw/experiments.hpp"
#include "abrw/genealogy.hpp"
#include "abrw/renorm.hpp"

using namespace abrw;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------

void boundary_suite() {
    Timer timer;
    int64_t checked = 0, failed = 0;
    // every sup-norm-connected subset of the 3x3x3 box with at most 5 points
    for_each_connected_subset({3, 3, 3}, 5, [&](const PointSet& a) {
        ++checked;
        if (!check_exterior_boundary(a).pass()) ++failed;
    });
    // 1000 random connected sets with up to 12 points, space-time dims 2, 3
    for (int dim : {2, 3}) {
        for (uint64_t i = 0; i < 500; ++i) {
            int size = 2 + static_cast<int>(
                               draw_u64({404, i, Purpose::ReplicaMix,
                                         static_cast<uint64_t>(dim)}) %
                               11);
            PointSet a = random_connected_halfspace_set(
                dim, size, 404, i + (dim == 3 ? 1000 : 0));
            ++checked;
            if (!check_exterior_boundary(a).pass()) ++failed;
        }
    }
    report("exterior-boundary", failed == 0,
           std::to_string(checked) + " sets, " + std::to_string(failed) +
               " failures",
           timer.elapsed());
}

void covering_suite() {
    Timer timer;
    LatticeConfig lat{1, 2};
    int failed = 0;
    for (uint64_t i = 0; i < 500; ++i) {
        int size = 1 + static_cast<int>(
                           draw_u64({505, i, Purpose::ReplicaMix, 0}) % 10);
        PointSet s = random_connected_halfspace_set(2, size, 505, i);
        CoveringResult res = covering_set(s, 1, 1, 1, lat);
        if (!res.pass()) ++failed;
    }
    report("covering-sets", failed == 0,
           "500 sets, " + std::to_string(failed) + " failures",
           timer.elapsed());
}

void coupling_suite() {
    Timer timer;
    const int seeds = 200;
    int64_t violations = 0;
    int64_t pairs = 0;
    for (int d : {1, 2}) {
        SimConfig base;
        base.d = d;
        base.L = d == 1 ? 32 : 10;
        base.mu_A = 1.0;
        base.T = 100.0;
        for (int s = 0; s < seeds; ++s) {
            SimConfig cfg = base;
            cfg.seed = replica_seed(600 + d, static_cast<uint64_t>(s));
            if (!couple_rate(cfg, 0.3, 1.5).pass) ++violations;
            SimConfig cn = cfg;
            cn.lambda = 0.4;
            if (!couple_no_recuperation(cn).pass) ++violations;
            SimConfig ci = cfg;
            ci.lambda = 0.4;
            if (!couple_initial(ci, 0.1, static_cast<uint64_t>(s)).pass)
                ++violations;
            pairs += 3;
        }
    }
    report("coupling-dominance", violations == 0,
           std::to_string(pairs) + " coupled pairs, " +
               std::to_string(violations) + " violations",
           timer.elapsed());
}

void genealogy_suite() {
    Timer timer;
    int bad_paths = 0, paths = 0;
    for (int run_idx = 0; run_idx < 100; ++run_idx) {
        SimConfig cfg;
        cfg.d = 2;
        cfg.L = 16;
        cfg.mu_A = 1.0;
        cfg.lambda = 0.05;
        cfg.T = 100.0;
        cfg.seed = replica_seed(700, static_cast<uint64_t>(run_idx));
        LoggedRun run = run_logged(cfg);
        RunAnalysis an(run);
        for (uint32_t idx : an.b_particles_at(cfg.T)) {
            ++paths;
            try {
                GenealogicalPath p = an.reconstruct(idx, cfg.T);
                if (!an.validate(p)) ++bad_paths;
            } catch (const std::exception&) {
                ++bad_paths;
            }
        }
    }
    bool pass1 = bad_paths == 0 && paths > 0;

    // dynamic program versus exhaustive enumeration on 1000 small instances
    int mismatches = 0;
    for (uint64_t inst = 0; inst < 1000; ++inst) {
        auto bits = [&](uint64_t c) {
            return draw_u64({701, inst, Purpose::ReplicaMix, c});
        };
        LoggedRun run;
        run.cfg.d = 1;
        run.cfg.L = 100;
        std::vector<int> pos;
        int n_particles = 2 + static_cast<int>(bits(0) % 3);
        for (int i = 0; i < n_particles; ++i) {
            int site = static_cast<int>(bits(1 + i) % 6);
            run.census.push_back({pack_pid(Site{i}, 0, 0), Site{site},
                                  PType::A, false});
            pos.push_back(site);
        }
        int n_events = 4 + static_cast<int>(bits(9) % 16);  // up to ~20
        for (int k = 0; k < n_events; ++k) {
            uint32_t actor =
                static_cast<uint32_t>(bits(20 + 2 * k) % n_particles);
            int step = (bits(21 + 2 * k) & 1) ? 1 : -1;
            Event ev;
            ev.time = 1.0 + k;
            ev.kind = EventKind::Jump;
            ev.actor = actor;
            ev.from = pack_site(Site{pos[actor]});
            pos[actor] += step;
            ev.to = pack_site(Site{pos[actor]});
            run.events.push_back(ev);
        }
        Site x{static_cast<int>(bits(10) % 6)};
        if (max_jumps(run, x, 1e6) != brute_force_jpaths(run, x, 1e6, true, 24))
            ++mismatches;
    }
    bool pass2 = mismatches == 0;
    report("genealogy-and-jumps", pass1 && pass2,
           std::to_string(paths) + " paths validated, " +
               std::to_string(bad_paths) + " bad; oracle mismatches " +
               std::to_string(mismatches),
           timer.elapsed());
}

void block_suite() {
    Timer timer;
    int64_t tested = 0, open = 0, violations = 0;
    for (int r = 0; r < 50; ++r) {
        SimConfig sim;
        sim.d = 1;
        sim.C0 = 2;
        sim.p = 1;
        sim.L = 512;
        sim.mu_A = 1.0;
        sim.lambda = 0.02;
        sim.seed = replica_seed(800, static_cast<uint64_t>(r));
        BlockExperimentResult res = run_block_experiment(sim, 3, 2);
        tested += res.edges_tested;
        open += res.edges_open;
        violations += res.propagation_violations;
    }
    report("edge-propagation", violations == 0 && open > 0,
           std::to_string(tested) + " edges (" + std::to_string(open) +
               " open), " + std::to_string(violations) + " violations",
           timer.elapsed());
}

void phase_shape_suite() {
    Timer timer;
    SimConfig cfg;
    cfg.d = 2;
    cfg.mu_A = 1.0;
    cfg.D = 1.0;
    cfg.L = 64;
    cfg.seed = 900;
    SweepResult sweep = coupled_sweep(cfg, {0.01, 10.0}, 200.0, 500);
    const SurvivalEstimate& low = sweep.points[0].est;
    const SurvivalEstimate& high = sweep.points[1].est;
    double gap = low.p_hat - high.p_hat;
    bool disjoint = low.ci.lo > high.ci.hi;
    bool pass = gap > 0.3 && disjoint && sweep.per_replica_monotone;
    report("phase-shape", pass,
           "p(0.01)=" + fmt(low.p_hat) + " p(10)=" + fmt(high.p_hat) +
               " gap=" + fmt(gap) +
               (sweep.per_replica_monotone ? ", monotone" : ", NON-MONOTONE"),
           timer.elapsed());
}

void jump_growth_suite() {
    Timer timer;
    const std::vector<double> horizons{100.0, 200.0, 400.0};
    std::vector<std::vector<double>> j_at(horizons.size());
    for (int rep = 0; rep < 50; ++rep) {
        SimConfig cfg;
        cfg.d = 2;
        cfg.mu_A = 1.0;
        cfg.L = 48;
        cfg.T = 400.0;
        cfg.lambda = 0.0;
        cfg.seed_mode = SeedMode::OneAtOrigin;  // one extra walker at 0
        cfg.seed = replica_seed(901, static_cast<uint64_t>(rep));
        Engine e(cfg);
        JumpFunctionalTracker tracker(e, Site{0, 0}, true);
        Engine::Observer obs = [&](const Engine& eng, const Event& ev) {
            tracker.on_event(eng, ev);
        };
        for (std::size_t h = 0; h < horizons.size(); ++h) {
            e.run_to(horizons[h], nullptr, &obs);
            j_at[h].push_back(static_cast<double>(tracker.best()));
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    std::vector<double> ratios;
    for (std::size_t h = 1; h < horizons.size(); ++h) {
        std::vector<double> r;
        for (std::size_t i = 0; i < j_at[h].size(); ++i)
            if (j_at[h - 1][i] > 0) r.push_back(j_at[h][i] / j_at[h - 1][i]);
        ratios.push_back(median(r));
    }
    bool ratio_ok = true;
    for (double r : ratios) ratio_ok = ratio_ok && r >= 1.5 && r <= 2.5;
    double lo_rate = 1e300, hi_rate = 0.0;
    std::string rates;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        double m = median(j_at[h]) / horizons[h];
        lo_rate = std::min(lo_rate, m);
        hi_rate = std::max(hi_rate, m);
        rates += (h ? " " : "") + fmt(m);
    }
    bool stable = hi_rate <= 1.3 * lo_rate;
    report("jump-linear-growth", ratio_ok && stable,
           "doubling ratios " + fmt(ratios[0]) + " " + fmt(ratios[1]) +
               "; J/t " + rates,
           timer.elapsed());
}

void frog_suite() {
    Timer timer;
    SimConfig rem;
    rem.d = 1;
    rem.L = 256;
    rem.mu_A = 2.5;  // dense enough that extinction spreads across the horizons
    rem.lambda = 0.1;
    rem.seed = 902;
    FrogRemovalStudy st =
        frog_removal_decay(rem, {100.0, 300.0, 500.0}, 500);
    bool removal_ok = st.estimates[0].p_hat > st.estimates[1].p_hat &&
                      st.estimates[1].p_hat > st.estimates[2].p_hat;

    SimConfig re;
    re.d = 2;
    re.L = 16;
    re.mu_A = 8.0;
    re.seed = 903;
    FrogReinsertionStudy rst =
        frog_reinsertion_survival(re, {100.0}, 50.0, 500);
    bool reinsertion_ok = rst.estimates[0].p_hat > 0.2;

    report("frog-variants", removal_ok && reinsertion_ok,
           "removal p(T)=" + fmt(st.estimates[0].p_hat) + "/" +
               fmt(st.estimates[1].p_hat) + "/" + fmt(st.estimates[2].p_hat) +
               "; reinsertion p=" + fmt(rst.estimates[0].p_hat),
           timer.elapsed());
}

void closed_form_suite() {
    Timer timer;
    bool ok = true;
    std::string detail;
    const std::pair<double, double> cases[] = {{0.01, 100.0}, {0.05, 40.0}};
    for (auto [lam, T] : cases) {
        SimConfig cfg;
        cfg.d = 2;
        cfg.L = 32;
        cfg.mu_A = 0.0;
        cfg.lambda = lam;
        cfg.seed = 904;
        SurvivalEstimate est = estimate_survival(cfg, T, 2000);
        double expect = std::exp(-lam * T);
        bool covered = est.ci.lo <= expect && expect <= est.ci.hi;
        ok = ok && covered;
        detail += "p=" + fmt(est.p_hat) + " vs " + fmt(expect) +
                  (covered ? " ok; " : " MISS; ");
    }
    report("closed-form-decay", ok, detail, timer.elapsed());
}

void determinism_suite() {
    Timer timer;
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 16;
    cfg.mu_A = 1.0;
    cfg.seed = 905;
    SweepResult s1 = coupled_sweep(cfg, {0.1, 1.0}, 25.0, 50, 2);
    SweepResult s2 = coupled_sweep(cfg, {0.1, 1.0}, 25.0, 50, 1);
    std::string c1 = sweep_csv(cfg, 25.0, 50, s1);
    std::string c2 = sweep_csv(cfg, 25.0, 50, s2);
    report("determinism", c1 == c2,
           c1 == c2 ? "byte-identical CSV across reruns and thread counts"
                    : "output differs",
           timer.elapsed());
}

}  // namespace

int main() {
    Timer total;
    boundary_suite();
    covering_suite();
    closed_form_suite();
    genealogy_suite();
    block_suite();
    coupling_suite();
    jump_growth_suite();
    frog_suite();
    determinism_suite();
    phase_shape_suite();
    std::printf("%s: %d criterion(s) failed (total %.1fs)\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures, total.elapsed());
    return g_failures == 0 ? 0 : 1;
}
