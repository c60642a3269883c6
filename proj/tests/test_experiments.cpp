#include <doctest.h>

#include <cmath>

#include "abrw/experiments.hpp"

using namespace abrw;

TEST_CASE("wilson intervals cover the point estimate") {
    for (int n : {1, 10, 100}) {
        for (int k = 0; k <= n; k += std::max(1, n / 7)) {
            WilsonInterval w = wilson(k, n);
            double p = static_cast<double>(k) / n;
            CHECK(w.lo <= p + 1e-12);
            CHECK(w.hi >= p - 1e-12);
            CHECK(w.lo >= 0.0);
            CHECK(w.hi <= 1.0);
        }
    }
}

TEST_CASE("zero rate with a field never goes extinct") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 12;
    cfg.mu_A = 0.5;
    cfg.lambda = 0.0;
    cfg.seed = 4;
    SurvivalEstimate est = estimate_survival(cfg, 20.0, 40);
    CHECK(est.survivors == est.replicas);
    CHECK(est.p_hat == 1.0);
    CHECK(est.mean_ext_time == -1.0);
}

TEST_CASE("single-particle survival matches the exponential law") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 8;
    cfg.mu_A = 0.0;
    cfg.lambda = 0.05;
    cfg.seed = 9;
    const double T = 20.0;
    SurvivalEstimate est = estimate_survival(cfg, T, 400);
    double expect = std::exp(-cfg.lambda * T);  // ~ 0.368
    CHECK(est.ci.lo < expect);
    CHECK(est.ci.hi > expect);
}

TEST_CASE("replica determinism") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 10;
    cfg.mu_A = 1.0;
    cfg.lambda = 0.3;
    cfg.seed = 77;
    auto a = run_replicas(cfg, 15.0, 30, 2);
    auto b = run_replicas(cfg, 15.0, 30, 1);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].survived == b[i].survived);
        CHECK(a[i].extinction_time == b[i].extinction_time);
        CHECK(a[i].max_b == b[i].max_b);
    }
}

TEST_CASE("coupled sweep: per-replica indicators exactly nonincreasing") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 16;
    cfg.mu_A = 1.0;
    cfg.seed = 31;
    SweepResult sweep = coupled_sweep(cfg, {0.05, 0.5, 2.0}, 25.0, 60);
    CHECK(sweep.per_replica_monotone);
    REQUIRE(sweep.points.size() == 3);
    CHECK(sweep.points[0].est.p_hat >= sweep.points[2].est.p_hat);
}

TEST_CASE("bracketing: degenerate grid reports an undefined upper edge") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 10;
    cfg.mu_A = 0.5;
    cfg.seed = 3;
    BracketResult res = bracket_lambda_c(cfg, {0.0}, 10.0, 30, 0);
    CHECK_FALSE(res.bracket.hi_defined);
    CHECK(res.bracket.lo_defined);  // rate 0 always survives
}

TEST_CASE("bracketing narrows between clearly alive and clearly dead rates") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 12;
    cfg.mu_A = 0.0;  // single particle: survival = exp(-rate T)
    cfg.seed = 8;
    BracketResult res = bracket_lambda_c(cfg, {0.001, 2.0}, 40.0, 80, 3);
    CHECK(res.bracket.lo_defined);
    CHECK(res.bracket.hi_defined);
    CHECK(res.bracket.lo < res.bracket.hi);
    CHECK(res.refinements.size() > 0);
}

TEST_CASE("extinction absorbs: extinct replicas report zero final count") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 10;
    cfg.mu_A = 0.8;
    cfg.lambda = 2.0;
    cfg.seed = 5;
    auto outs = run_replicas(cfg, 30.0, 40);
    int extinct = 0;
    for (const ReplicaOutcome& o : outs) {
        if (!o.survived) {
            ++extinct;
            CHECK(o.final_b == 0);
            CHECK(o.extinction_time >= 0.0);
            CHECK(o.extinction_time <= 30.0);
        }
    }
    CHECK(extinct > 0);  // rate 2 kills quickly at this size
}

TEST_CASE("mass-bound frequencies are nonincreasing in the size floor") {
    MassBoundStudy st = mass_bound_check(2, 8.0, 11, 6, {1, 2, 3, 4, 5}, 60);
    for (std::size_t i = 1; i < st.violation_freq.size(); ++i)
        CHECK(st.violation_freq[i] <= st.violation_freq[i - 1]);
}

TEST_CASE("frog removal decay study is monotone in the horizon") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 64;
    cfg.mu_A = 1.0;
    cfg.lambda = 0.15;
    cfg.seed = 21;
    FrogRemovalStudy st = frog_removal_decay(cfg, {20.0, 60.0, 120.0}, 60);
    REQUIRE(st.estimates.size() == 3);
    CHECK(st.estimates[0].p_hat >= st.estimates[1].p_hat);
    CHECK(st.estimates[1].p_hat >= st.estimates[2].p_hat);
}

TEST_CASE("window doubling with a tiny horizon changes nothing") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 16;
    cfg.mu_A = 0.5;
    cfg.lambda = 0.5;
    cfg.seed = 13;
    WindowDoublingReport rep = window_doubling(cfg, 2.0, 40);
    CHECK(rep.gap == 0.0);  // no replica ever feels the boundary
}

TEST_CASE("discretization report runs and exposes gaps") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 10;
    cfg.mu_A = 0.5;
    cfg.lambda = 0.3;
    cfg.seed = 17;
    DiscretizationReport rep =
        discretization_convergence(cfg, {4, 16}, 10.0, 40);
    CHECK(rep.gaps.size() == 2);
    for (double g : rep.gaps) CHECK(g <= 1.0);
}

TEST_CASE("csv and jsonl serialization are stable") {
    SimConfig cfg;
    cfg.d = 1;
    cfg.L = 8;
    cfg.mu_A = 0.5;
    cfg.seed = 2;
    SweepResult sweep = coupled_sweep(cfg, {0.1, 1.0}, 5.0, 10);
    std::string csv1 = sweep_csv(cfg, 5.0, 10, sweep);
    SweepResult sweep2 = coupled_sweep(cfg, {0.1, 1.0}, 5.0, 10);
    std::string csv2 = sweep_csv(cfg, 5.0, 10, sweep2);
    CHECK(csv1 == csv2);
    CHECK(csv1.find("lambda,T,L,replicas") == 0);

    ReplicaOutcome o{true, -1.0, 3, 2};
    std::string line = summary_jsonl(cfg, 0, o);
    CHECK(line.find("\"survived\":true") != std::string::npos);
}
