// Monte Carlo estimation of survival probabilities, coupled rate sweeps with
// critical-rate bracketing, the frog-variant and mass-bound studies, and the
// truncation / time-discretization convergence diagnostics.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abrw/engine.hpp"

namespace abrw {

struct WilsonInterval {
    double lo = 0.0, hi = 1.0;
};
// 95% score interval by default.
WilsonInterval wilson(int successes, int n, double z = 1.959963984540054);

struct ReplicaOutcome {
    bool survived = false;
    double extinction_time = -1.0;
    int max_b = 0;
    int final_b = 0;
};

// Independent replicas of cfg run to horizon T; replica r uses the derived
// seed replica_seed(cfg.seed, r). Aggregation is order-independent.
std::vector<ReplicaOutcome> run_replicas(const SimConfig& cfg, double T,
                                         int replicas, int threads = 0);

struct SurvivalEstimate {
    std::string fingerprint;
    int replicas = 0;
    int survivors = 0;
    double p_hat = 0.0;
    WilsonInterval ci;
    double mean_ext_time = -1.0;  // over extinct replicas; -1 when none died
};

SurvivalEstimate estimate_survival(const SimConfig& cfg, double T,
                                   int replicas, int threads = 0);
SurvivalEstimate summarize(const SimConfig& cfg, double T,
                           const std::vector<ReplicaOutcome>& outcomes);

// Coupled rate sweep: all points share walks and a common master clock (the
// largest rate), so per-replica survival indicators are nonincreasing in the
// rate as an exact set statement, not just on average.
struct SweepPoint {
    double lambda = 0.0;
    SurvivalEstimate est;
};
struct SweepResult {
    std::vector<SweepPoint> points;  // ascending in lambda
    bool per_replica_monotone = true;
    // indicator matrix [replica][point] for downstream checks
    std::vector<std::vector<uint8_t>> indicators;
};
SweepResult coupled_sweep(const SimConfig& base,
                          const std::vector<double>& lambdas, double T,
                          int replicas, int threads = 0);

struct RateBracket {
    bool lo_defined = false, hi_defined = false;
    double lo = 0.0;  // survival significantly above zero
    double hi = 0.0;  // estimate consistent with zero
};
struct BracketResult {
    SweepResult curve;
    RateBracket bracket;
    std::vector<SweepPoint> refinements;
};
// Grid sweep plus bisection refinement of the survival/extinction window.
BracketResult bracket_lambda_c(const SimConfig& base,
                               const std::vector<double>& grid, double T,
                               int replicas, int bisection_steps,
                               int threads = 0);

// ---------------------------------------------------------------------------
// Variant studies
// ---------------------------------------------------------------------------

struct FrogRemovalStudy {
    std::vector<double> horizons;
    std::vector<SurvivalEstimate> estimates;  // one per horizon, shared runs
};
FrogRemovalStudy frog_removal_decay(const SimConfig& base,
                                    const std::vector<double>& horizons,
                                    int replicas, int threads = 0);

struct FrogReinsertionStudy {
    std::vector<double> lambdas;
    std::vector<SurvivalEstimate> estimates;
};
FrogReinsertionStudy frog_reinsertion_survival(const SimConfig& base,
                                               const std::vector<double>& lambdas,
                                               double T, int replicas,
                                               int threads = 0);

// Empirical frequency that some connected set C containing the origin with
// k0 <= |C| <= cap has initial mass below mu_A |C| / 2; nonincreasing in k0
// by construction.
struct MassBoundStudy {
    std::vector<int> k0;
    std::vector<double> violation_freq;
    int cap = 0;
    int samples = 0;
};
MassBoundStudy mass_bound_check(int d, double mu_A, uint64_t seed, int cap,
                                const std::vector<int>& k0_values, int samples);

// Survival probability of a system holding only the particles of one
// scale-r pedestal, as a function of the recuperation rate.
struct PedestalStudy {
    std::vector<double> lambdas;
    std::vector<SurvivalEstimate> estimates;
};
PedestalStudy pedestal_extinction(const SimConfig& base, int r,
                                  const std::vector<double>& lambdas, double T,
                                  int replicas, int threads = 0);

// ---------------------------------------------------------------------------
// Convergence diagnostics
// ---------------------------------------------------------------------------

struct WindowDoublingReport {
    SurvivalEstimate small_window, big_window;
    double gap = 0.0;
};
WindowDoublingReport window_doubling(const SimConfig& cfg, double T,
                                     int replicas, int threads = 0);

struct DiscretizationReport {
    std::vector<int> n_values;
    std::vector<SurvivalEstimate> discrete;
    SurvivalEstimate continuous;
    std::vector<double> gaps;
};
DiscretizationReport discretization_convergence(const SimConfig& cfg,
                                                const std::vector<int>& n_values,
                                                double T, int replicas,
                                                int threads = 0);

// ---------------------------------------------------------------------------
// Serialization shared by the CLI and the acceptance suite (byte-stable)
// ---------------------------------------------------------------------------

std::string format_double(double v);
std::string config_fingerprint(const SimConfig& cfg, double T);
std::string sweep_csv(const SimConfig& base, double T, int replicas,
                      const SweepResult& sweep);
std::string summary_jsonl(const SimConfig& cfg, uint64_t replica,
                          const ReplicaOutcome& o);

int resolve_threads(int requested);

}  // namespace abrw
