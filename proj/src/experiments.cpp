#include "abrw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <functional>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "abrw/lattice.hpp"

namespace abrw {

WilsonInterval wilson(int successes, int n, double z) {
    WilsonInterval w;
    if (n <= 0) return w;
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ABRW_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

template <typename F>
void parallel_for(int n, int threads, F f) {
    threads = std::min(std::max(threads, 1), n > 0 ? n : 1);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                f(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<ReplicaOutcome> run_replicas(const SimConfig& cfg, double T,
                                         int replicas, int threads) {
    std::vector<ReplicaOutcome> out(replicas);
    parallel_for(replicas, resolve_threads(threads), [&](int r) {
        SimConfig c = cfg;
        c.seed = replica_seed(cfg.seed, static_cast<uint64_t>(r));
        c.T = T;
        c.stop_on_extinction = true;
        RunSummary s = run_summary_only(c);
        out[r] = {s.survived, s.extinction_time, s.max_b, s.final_b};
    });
    return out;
}

std::string config_fingerprint(const SimConfig& cfg, double T) {
    std::ostringstream os;
    os << variant_name(cfg.variant) << ";d=" << cfg.d << ";D="
       << format_double(cfg.D) << ";lambda=" << format_double(cfg.lambda)
       << ";muA=" << format_double(cfg.mu_A) << ";L=" << cfg.L
       << ";T=" << format_double(T) << ";seed=" << cfg.seed;
    if (cfg.variant == Variant::DiscreteN) os << ";n=" << cfg.n;
    return os.str();
}

SurvivalEstimate summarize(const SimConfig& cfg, double T,
                           const std::vector<ReplicaOutcome>& outcomes) {
    SurvivalEstimate est;
    est.fingerprint = config_fingerprint(cfg, T);
    est.replicas = static_cast<int>(outcomes.size());
    double ext_sum = 0.0;
    int deaths = 0;
    for (const ReplicaOutcome& o : outcomes) {
        if (o.survived) {
            ++est.survivors;
        } else {
            ++deaths;
            ext_sum += o.extinction_time;
        }
    }
    est.p_hat = est.replicas ? static_cast<double>(est.survivors) / est.replicas
                             : 0.0;
    est.ci = wilson(est.survivors, est.replicas);
    est.mean_ext_time = deaths ? ext_sum / deaths : -1.0;
    return est;
}

SurvivalEstimate estimate_survival(const SimConfig& cfg, double T,
                                   int replicas, int threads) {
    return summarize(cfg, T, run_replicas(cfg, T, replicas, threads));
}

SweepResult coupled_sweep(const SimConfig& base,
                          const std::vector<double>& lambdas, double T,
                          int replicas, int threads) {
    std::vector<double> ls = lambdas;
    std::sort(ls.begin(), ls.end());
    const double ref = ls.empty() ? 0.0 : ls.back();
    SweepResult res;
    res.indicators.assign(replicas, std::vector<uint8_t>(ls.size(), 0));
    std::vector<std::vector<ReplicaOutcome>> outs(
        ls.size(), std::vector<ReplicaOutcome>(replicas));
    parallel_for(replicas, resolve_threads(threads), [&](int r) {
        for (std::size_t li = 0; li < ls.size(); ++li) {
            SimConfig c = base;
            c.lambda = ls[li];
            c.lambda_ref = ref > 0.0 ? ref : -1.0;
            c.seed = replica_seed(base.seed, static_cast<uint64_t>(r));
            c.T = T;
            c.stop_on_extinction = true;
            RunSummary s = run_summary_only(c);
            outs[li][r] = {s.survived, s.extinction_time, s.max_b, s.final_b};
            res.indicators[r][li] = s.survived ? 1 : 0;
        }
    });
    for (std::size_t li = 0; li < ls.size(); ++li) {
        SimConfig c = base;
        c.lambda = ls[li];
        SweepPoint pt;
        pt.lambda = ls[li];
        pt.est = summarize(c, T, outs[li]);
        res.points.push_back(std::move(pt));
    }
    for (int r = 0; r < replicas && res.per_replica_monotone; ++r)
        for (std::size_t li = 1; li < ls.size(); ++li)
            if (res.indicators[r][li] > res.indicators[r][li - 1]) {
                res.per_replica_monotone = false;
                break;
            }
    return res;
}

BracketResult bracket_lambda_c(const SimConfig& base,
                               const std::vector<double>& grid, double T,
                               int replicas, int bisection_steps,
                               int threads) {
    BracketResult res;
    res.curve = coupled_sweep(base, grid, T, replicas, threads);
    if (!res.curve.per_replica_monotone)
        throw std::logic_error("coupled sweep produced a non-monotone curve");
    const double floor_eps = 0.025;
    auto significantly_alive = [&](const SurvivalEstimate& e) {
        return e.ci.lo > floor_eps;
    };
    auto consistent_with_zero = [&](const SurvivalEstimate& e) {
        return e.survivors == 0 || e.ci.hi < floor_eps;
    };
    RateBracket br;
    for (const SweepPoint& pt : res.curve.points) {
        if (significantly_alive(pt.est)) {
            br.lo_defined = true;
            br.lo = pt.lambda;
        }
        if (!br.hi_defined && consistent_with_zero(pt.est)) {
            br.hi_defined = true;
            br.hi = pt.lambda;
        }
    }
    const double ref =
        res.curve.points.empty() ? 0.0 : res.curve.points.back().lambda;
    while (bisection_steps-- > 0 && br.lo_defined && br.hi_defined &&
           br.hi > br.lo) {
        double mid = 0.5 * (br.lo + br.hi);
        SimConfig c = base;
        c.lambda = mid;
        c.lambda_ref = ref > 0.0 ? ref : -1.0;
        SurvivalEstimate est = estimate_survival(c, T, replicas, threads);
        SweepPoint pt;
        pt.lambda = mid;
        pt.est = est;
        res.refinements.push_back(pt);
        if (significantly_alive(est))
            br.lo = mid;
        else if (consistent_with_zero(est))
            br.hi = mid;
        else
            break;  // indeterminate at this replica budget
    }
    res.bracket = br;
    return res;
}

// ---------------------------------------------------------------------------
// Variant studies
// ---------------------------------------------------------------------------

FrogRemovalStudy frog_removal_decay(const SimConfig& base,
                                    const std::vector<double>& horizons,
                                    int replicas, int threads) {
    FrogRemovalStudy study;
    study.horizons = horizons;
    std::vector<double> hs = horizons;
    std::sort(hs.begin(), hs.end());
    const double t_max = hs.empty() ? 0.0 : hs.back();
    SimConfig cfg = base;
    cfg.variant = Variant::FrogRemoval;
    std::vector<ReplicaOutcome> outs =
        run_replicas(cfg, t_max, replicas, threads);
    for (double T : horizons) {
        std::vector<ReplicaOutcome> at_t;
        at_t.reserve(outs.size());
        for (const ReplicaOutcome& o : outs) {
            ReplicaOutcome r = o;
            r.survived = o.survived || o.extinction_time > T;
            at_t.push_back(r);
        }
        study.estimates.push_back(summarize(cfg, T, at_t));
    }
    return study;
}

FrogReinsertionStudy frog_reinsertion_survival(
    const SimConfig& base, const std::vector<double>& lambdas, double T,
    int replicas, int threads) {
    FrogReinsertionStudy study;
    study.lambdas = lambdas;
    for (double lam : lambdas) {
        SimConfig cfg = base;
        cfg.variant = Variant::FrogReinsertion;
        cfg.lambda = lam;
        study.estimates.push_back(estimate_survival(cfg, T, replicas, threads));
    }
    return study;
}

namespace {

// Connected subsets of Z^d (nearest-neighbor adjacency) containing the
// origin, enumerated once per size cap by frontier growth with untried
// cells, each subset produced exactly once.
void enumerate_origin_animals(int d, int cap,
                              const std::function<void(const std::vector<int64_t>&)>& fn) {
    std::vector<int64_t> current;           // packed cells, origin first
    std::unordered_set<int64_t> in_set, forbidden;
    std::vector<int64_t> frontier;

    Site origin(d, 0);
    auto neighbors_of = [&](int64_t code) {
        Site x = unpack_site(code, d);
        std::vector<int64_t> out;
        for (int s = 0; s < d; ++s)
            for (int dd : {-1, 1}) {
                Site y = x;
                y[s] += dd;
                out.push_back(pack_site(y));
            }
        return out;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t frontier_from) {
        fn(current);
        if (static_cast<int>(current.size()) == cap) return;
        // take untried frontier cells in order; cells tried at this level
        // stay forbidden for deeper levels
        std::size_t n0 = frontier.size();
        std::vector<int64_t> tried;
        for (std::size_t fi = frontier_from; fi < frontier.size(); ++fi) {
            int64_t cell = frontier[fi];
            if (in_set.count(cell) || forbidden.count(cell)) continue;
            in_set.insert(cell);
            current.push_back(cell);
            std::size_t before = frontier.size();
            for (int64_t nb : neighbors_of(cell))
                if (!in_set.count(nb) && !forbidden.count(nb))
                    frontier.push_back(nb);
            rec(fi + 1);
            frontier.resize(before);
            current.pop_back();
            in_set.erase(cell);
            forbidden.insert(cell);
            tried.push_back(cell);
        }
        for (int64_t c : tried) forbidden.erase(c);
        (void)n0;
    };

    in_set.insert(pack_site(origin));
    current.push_back(pack_site(origin));
    for (int64_t nb : neighbors_of(pack_site(origin))) frontier.push_back(nb);
    rec(0);
}

}  // namespace

MassBoundStudy mass_bound_check(int d, double mu_A, uint64_t seed, int cap,
                                const std::vector<int>& k0_values,
                                int samples) {
    MassBoundStudy study;
    study.cap = cap;
    study.samples = samples;
    study.k0 = k0_values;

    std::vector<std::vector<int64_t>> animals;
    enumerate_origin_animals(d, cap, [&](const std::vector<int64_t>& cells) {
        animals.push_back(cells);
    });

    // per sample: the largest violating |C| (0 when none violates); a
    // violating set of size in [k0, cap] exists iff this exceeds k0
    std::vector<int> max_violating(samples, 0);
    std::unordered_map<int64_t, uint32_t> field;
    for (int rep = 0; rep < samples; ++rep) {
        field.clear();
        uint64_t s = replica_seed(seed, static_cast<uint64_t>(rep));
        auto count_at = [&](int64_t cell) -> uint32_t {
            auto it = field.find(cell);
            if (it != field.end()) return it->second;
            uint32_t c = poisson_inverse(
                mu_A, uniform01(draw_u64(
                          {s, static_cast<uint64_t>(cell), Purpose::InitField, 0})));
            field[cell] = c;
            return c;
        };
        for (const auto& cells : animals) {
            int k = static_cast<int>(cells.size());
            if (k <= max_violating[rep]) continue;
            int64_t mass = 0;
            for (int64_t c : cells) mass += count_at(c);
            if (static_cast<double>(mass) < 0.5 * mu_A * k)
                max_violating[rep] = k;
        }
    }
    for (int k0 : k0_values) {
        int viol = 0;
        for (int rep = 0; rep < samples; ++rep)
            if (max_violating[rep] >= k0) ++viol;
        study.violation_freq.push_back(static_cast<double>(viol) / samples);
    }
    return study;
}

PedestalStudy pedestal_extinction(const SimConfig& base, int r,
                                  const std::vector<double>& lambdas, double T,
                                  int replicas, int threads) {
    PedestalStudy study;
    study.lambdas = lambdas;
    LatticeConfig lat{base.d, base.C0};
    Region ped = block_region({Site(base.d, 0), 1, r, BlockKind::Pedestal}, lat);
    for (double lam : lambdas) {
        SimConfig cfg = base;
        cfg.lambda = lam;
        cfg.variant = Variant::Standard;
        cfg.seed_mode = SeedMode::OneAtOrigin;
        std::vector<ReplicaOutcome> outs(replicas);
        parallel_for(replicas, resolve_threads(threads), [&](int rep) {
            SimConfig c = cfg;
            c.seed = replica_seed(cfg.seed, static_cast<uint64_t>(rep));
            c.T = T;
            c.stop_on_extinction = true;
            Census full = build_census(c);
            Census inside;
            for (const CensusEntry& e : full)
                if (e.seed_added || ped.contains_site(e.site))
                    inside.push_back(e);
            Engine eng(c, inside);
            eng.run_to(T, nullptr, nullptr);
            RunSummary s = eng.summary();
            outs[rep] = {s.survived, s.extinction_time, s.max_b, s.final_b};
        });
        SimConfig label = cfg;
        study.estimates.push_back(summarize(label, T, outs));
    }
    return study;
}

// ---------------------------------------------------------------------------
// Convergence diagnostics
// ---------------------------------------------------------------------------

WindowDoublingReport window_doubling(const SimConfig& cfg, double T,
                                     int replicas, int threads) {
    WindowDoublingReport rep;
    rep.small_window = estimate_survival(cfg, T, replicas, threads);
    SimConfig big = cfg;
    big.L = 2 * cfg.L;
    rep.big_window = estimate_survival(big, T, replicas, threads);
    rep.gap = std::abs(rep.small_window.p_hat - rep.big_window.p_hat);
    return rep;
}

DiscretizationReport discretization_convergence(
    const SimConfig& cfg, const std::vector<int>& n_values, double T,
    int replicas, int threads) {
    DiscretizationReport rep;
    rep.n_values = n_values;
    rep.continuous = estimate_survival(cfg, T, replicas, threads);
    for (int n : n_values) {
        SimConfig c = cfg;
        c.variant = Variant::DiscreteN;
        c.n = n;
        SurvivalEstimate est = estimate_survival(c, T, replicas, threads);
        rep.gaps.push_back(std::abs(est.p_hat - rep.continuous.p_hat));
        rep.discrete.push_back(std::move(est));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v,
                             std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string sweep_csv(const SimConfig& base, double T, int replicas,
                      const SweepResult& sweep) {
    std::ostringstream os;
    os << "lambda,T,L,replicas,survivors,p_hat,ci_lo,ci_hi,mean_ext_time\n";
    for (const SweepPoint& pt : sweep.points) {
        os << format_double(pt.lambda) << ',' << format_double(T) << ','
           << base.L << ',' << pt.est.replicas << ',' << pt.est.survivors
           << ',' << format_double(pt.est.p_hat) << ','
           << format_double(pt.est.ci.lo) << ',' << format_double(pt.est.ci.hi)
           << ',' << format_double(pt.est.mean_ext_time) << '\n';
    }
    return os.str();
}

std::string summary_jsonl(const SimConfig& cfg, uint64_t replica,
                          const ReplicaOutcome& o) {
    std::ostringstream os;
    os << "{\"seed\":" << cfg.seed << ",\"replica\":" << replica
       << ",\"variant\":\"" << variant_name(cfg.variant) << "\""
       << ",\"d\":" << cfg.d << ",\"D\":" << format_double(cfg.D)
       << ",\"lambda\":" << format_double(cfg.lambda)
       << ",\"muA\":" << format_double(cfg.mu_A) << ",\"L\":" << cfg.L
       << ",\"T\":" << format_double(cfg.T)
       << ",\"survived\":" << (o.survived ? "true" : "false")
       << ",\"extinction_time\":" << format_double(o.extinction_time)
       << ",\"max_B\":" << o.max_b << ",\"final_B\":" << o.final_b << "}";
    return os.str();
}

}  // namespace abrw
