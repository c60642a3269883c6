// Batch entry point: config parsing, subcommand dispatch, CSV/JSON emission.
// Exit codes: 0 success, 1 mathematical invariant violation, 2 usage error.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "abrw/couplings.hpp"
#include "abrw/engine.hpp"
#include "abrw/experiments.hpp"
#include "abrw/genealogy.hpp"
#include "abrw/renorm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config files: `key = value` lines, '#' comments. Unknown keys rejected.
// ---------------------------------------------------------------------------

void apply_config_key(abrw::SimConfig& cfg, const std::string& key,
                      const std::string& value) {
    auto to_int = [&](const std::string& v) { return std::stoi(v); };
    auto to_u64 = [&](const std::string& v) { return std::stoull(v); };
    auto to_dbl = [&](const std::string& v) { return std::stod(v); };
    auto to_bool = [&](const std::string& v) {
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw CliError("boolean expected for key '" + key + "'");
    };
    if (key == "d") cfg.d = to_int(value);
    else if (key == "D") cfg.D = to_dbl(value);
    else if (key == "lambda") cfg.lambda = to_dbl(value);
    else if (key == "muA") cfg.mu_A = to_dbl(value);
    else if (key == "L") cfg.L = to_int(value);
    else if (key == "T") cfg.T = to_dbl(value);
    else if (key == "seed") cfg.seed = to_u64(value);
    else if (key == "n") cfg.n = to_int(value);
    else if (key == "C0") cfg.C0 = to_int(value);
    else if (key == "p") cfg.p = to_int(value);
    else if (key == "convertAtSeed") cfg.convert_at_seed = to_bool(value);
    else if (key == "boundary") {
        if (value == "torus") cfg.boundary = abrw::Boundary::Torus;
        else if (value == "reflecting") cfg.boundary = abrw::Boundary::Reflecting;
        else throw CliError("unknown boundary '" + value + "'");
    } else if (key == "variant") {
        auto v = abrw::variant_from_name(value);
        if (!v) throw CliError("unknown variant '" + value + "'");
        cfg.variant = *v;
    } else if (key == "initialB") {
        if (value == "one-at-origin") cfg.seed_mode = abrw::SeedMode::OneAtOrigin;
        else if (value == "one-at-midpoint")
            cfg.seed_mode = abrw::SeedMode::OneAtMidpoint;
        else if (value == "none") cfg.seed_mode = abrw::SeedMode::None;
        else throw CliError("unknown initialB mode '" + value + "'");
    } else {
        throw CliError("unknown config key '" + key + "'");
    }
}

void load_config_file(abrw::SimConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto not_space = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(),
                   std::find_if(line.begin(), line.end(), not_space));
        line.erase(std::find_if(line.rbegin(), line.rend(), not_space).base(),
                   line.end());
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CliError("line " + std::to_string(lineno) +
                           ": expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), not_space).base(),
                  key.end());
        value.erase(value.begin(),
                    std::find_if(value.begin(), value.end(), not_space));
        apply_config_key(cfg, key, value);
    }
}

json config_to_json(const abrw::SimConfig& cfg) {
    json j;
    j["d"] = cfg.d;
    j["D"] = cfg.D;
    j["lambda"] = cfg.lambda;
    j["muA"] = cfg.mu_A;
    j["L"] = cfg.L;
    j["T"] = cfg.T;
    j["seed"] = cfg.seed;
    j["variant"] = abrw::variant_name(cfg.variant);
    j["boundary"] = cfg.boundary == abrw::Boundary::Torus ? "torus" : "reflecting";
    j["n"] = cfg.n;
    j["C0"] = cfg.C0;
    j["p"] = cfg.p;
    j["convertAtSeed"] = cfg.convert_at_seed;
    switch (cfg.seed_mode) {
        case abrw::SeedMode::OneAtOrigin: j["initialB"] = "one-at-origin"; break;
        case abrw::SeedMode::OneAtMidpoint: j["initialB"] = "one-at-midpoint"; break;
        case abrw::SeedMode::ExplicitSites: j["initialB"] = "explicit"; break;
        case abrw::SeedMode::None: j["initialB"] = "none"; break;
    }
    return j;
}

void config_from_json(abrw::SimConfig& cfg, const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "d" || key == "L" || key == "n" || key == "C0" || key == "p")
            apply_config_key(cfg, key, std::to_string(it->get<int64_t>()));
        else if (key == "seed")
            apply_config_key(cfg, key, std::to_string(it->get<uint64_t>()));
        else if (key == "convertAtSeed")
            apply_config_key(cfg, key, it->get<bool>() ? "true" : "false");
        else if (it->is_number())
            apply_config_key(cfg, key, abrw::format_double(it->get<double>()));
        else
            apply_config_key(cfg, key, it->get<std::string>());
    }
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write " + path.string());
    out << content;
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const abrw::SimConfig& cfg, const json& extra,
                    const std::vector<std::string>& outputs) {
    json m;
    m["tool_version"] = kToolVersion;
    m["subcommand"] = subcommand;
    m["config"] = config_to_json(cfg);
    m["args"] = extra;
    m["seed"] = cfg.seed;
    m["outputs"] = outputs;
    m["created"] = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
    write_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Subcommand bodies (shared between direct dispatch and manifest rerun)
// ---------------------------------------------------------------------------

int do_simulate(const abrw::SimConfig& cfg, int replicas, const fs::path& out,
                const json& args) {
    std::ostringstream os;
    auto outcomes = abrw::run_replicas(cfg, cfg.T, replicas);
    for (int r = 0; r < replicas; ++r)
        os << abrw::summary_jsonl(cfg, static_cast<uint64_t>(r), outcomes[r])
           << '\n';
    if (out.empty()) {
        std::cout << os.str();
    } else {
        write_file(out / "summaries.jsonl", os.str());
        write_manifest(out, "simulate", cfg, args, {"summaries.jsonl"});
    }
    return 0;
}

int do_sweep(const abrw::SimConfig& cfg, const std::vector<double>& lambdas,
             int replicas, int bisect, const fs::path& out, const json& args) {
    abrw::BracketResult res =
        abrw::bracket_lambda_c(cfg, lambdas, cfg.T, replicas, bisect);
    std::string csv = abrw::sweep_csv(cfg, cfg.T, replicas, res.curve);
    std::ostringstream extra;
    extra << "bracket_lo,"
          << (res.bracket.lo_defined ? abrw::format_double(res.bracket.lo)
                                     : std::string("undefined"))
          << "\nbracket_hi,"
          << (res.bracket.hi_defined ? abrw::format_double(res.bracket.hi)
                                     : std::string("undefined"))
          << "\n";
    if (out.empty()) {
        std::cout << csv << extra.str();
    } else {
        write_file(out / "curve.csv", csv);
        write_file(out / "bracket.csv", extra.str());
        write_manifest(out, "sweep", cfg, args, {"curve.csv", "bracket.csv"});
    }
    if (!res.curve.per_replica_monotone) return 1;
    return 0;
}

int do_couple(const abrw::SimConfig& cfg, const std::string& check,
              double lambda1, double lambda2, int seeds, const fs::path& out,
              const json& args) {
    std::ostringstream os;
    bool all_pass = true;
    for (int s = 0; s < seeds; ++s) {
        abrw::SimConfig c = cfg;
        c.seed = abrw::replica_seed(cfg.seed, static_cast<uint64_t>(s));
        abrw::DominanceReport rep;
        if (check == "rate") {
            rep = abrw::couple_rate(c, lambda1, lambda2);
        } else if (check == "norecup") {
            c.lambda = lambda1;
            rep = abrw::couple_no_recuperation(c);
        } else if (check == "initial") {
            c.lambda = lambda1;
            rep = abrw::couple_initial(c, 0.1, 17);
        } else {
            throw CliError("unknown coupling check '" + check + "'");
        }
        all_pass = all_pass && rep.pass;
        os << "{\"check\":\"" << check << "\",\"seed\":" << c.seed
           << ",\"T\":" << abrw::format_double(cfg.T) << ",\"verdict\":\""
           << (rep.pass ? "pass" : "fail") << "\"";
        if (rep.first_violation)
            os << ",\"violation\":{\"time\":"
               << abrw::format_double(rep.first_violation->time)
               << ",\"pid\":" << rep.first_violation->pid << ",\"what\":\""
               << rep.first_violation->what << "\"}";
        os << "}\n";
    }
    if (out.empty()) {
        std::cout << os.str();
    } else {
        write_file(out / "verdicts.jsonl", os.str());
        write_manifest(out, "couple", cfg, args, {"verdicts.jsonl"});
    }
    return all_pass ? 0 : 1;
}

int do_jpath(const abrw::SimConfig& cfg, const std::vector<double>& times,
             int replicas, const fs::path& out, const json& args) {
    std::ostringstream os;
    os << "replica,t,J,J_over_t\n";
    for (int r = 0; r < replicas; ++r) {
        abrw::SimConfig c = cfg;
        c.seed = abrw::replica_seed(cfg.seed, static_cast<uint64_t>(r));
        c.seed_mode = abrw::SeedMode::None;
        c.lambda = 0.0;
        abrw::LoggedRun run = abrw::run_logged(c);
        // one added walker at the origin so J(t,0) never degenerates
        for (double t : times) {
            int64_t j = abrw::max_jumps(run, abrw::Site(c.d, 0), t, true);
            os << r << ',' << abrw::format_double(t) << ',' << j << ','
               << abrw::format_double(static_cast<double>(j) / t) << '\n';
        }
    }
    if (out.empty()) {
        std::cout << os.str();
    } else {
        write_file(out / "jpath.csv", os.str());
        write_manifest(out, "jpath", cfg, args, {"jpath.csv"});
    }
    return 0;
}

int do_blocks(const abrw::SimConfig& cfg, int layers, int radius, int runs,
              const fs::path& out, const json& args) {
    std::ostringstream os;
    os << "p,lambda,edges_tested,edges_open,propagation_violations\n";
    int64_t violations = 0;
    int64_t tested = 0, open = 0;
    for (int r = 0; r < runs; ++r) {
        abrw::SimConfig c = cfg;
        c.seed = abrw::replica_seed(cfg.seed, static_cast<uint64_t>(r));
        abrw::BlockExperimentResult res =
            abrw::run_block_experiment(c, layers, radius);
        tested += res.edges_tested;
        open += res.edges_open;
        violations += res.propagation_violations;
    }
    os << cfg.p << ',' << abrw::format_double(cfg.lambda) << ',' << tested
       << ',' << open << ',' << violations << '\n';
    if (out.empty()) {
        std::cout << os.str();
    } else {
        write_file(out / "blocks.csv", os.str());
        write_manifest(out, "blocks", cfg, args, {"blocks.csv"});
    }
    return violations == 0 ? 0 : 1;
}

int do_boundary_check(int dim, int max_size, int random_sets, int random_size,
                      uint64_t seed, const fs::path& out, const json& args) {
    std::ostringstream os;
    int64_t checked = 0, failed = 0;
    std::vector<int> extents(dim, 3);
    abrw::for_each_connected_subset(extents, max_size,
                                    [&](const abrw::PointSet& a) {
                                        ++checked;
                                        auto rep = abrw::check_exterior_boundary(a);
                                        if (!rep.pass()) ++failed;
                                    });
    for (int i = 0; i < random_sets; ++i) {
        abrw::PointSet a = abrw::random_connected_halfspace_set(
            dim, 2 + static_cast<int>(abrw::draw_u64(
                         {seed, static_cast<uint64_t>(i), abrw::Purpose::ReplicaMix, 7}) %
                     static_cast<uint64_t>(random_size - 1)),
            seed, static_cast<uint64_t>(i));
        ++checked;
        auto rep = abrw::check_exterior_boundary(a);
        if (!rep.pass()) ++failed;
    }
    os << "sets_checked,failures\n" << checked << ',' << failed << '\n';
    if (out.empty()) {
        std::cout << os.str();
    } else {
        write_file(out / "boundary.csv", os.str());
        abrw::SimConfig dummy;
        write_manifest(out, "boundary-check", dummy, args, {"boundary.csv"});
    }
    return failed == 0 ? 0 : 1;
}

int do_variants(const abrw::SimConfig& cfg, int replicas, const fs::path& out,
                const json& args) {
    std::ostringstream os;
    os << "study,param,value,p_hat,ci_lo,ci_hi\n";
    {
        abrw::SimConfig c = cfg;
        c.d = 1;
        c.lambda = 0.1;
        auto st = abrw::frog_removal_decay(c, {100.0, 300.0, 500.0}, replicas);
        for (std::size_t i = 0; i < st.horizons.size(); ++i)
            os << "frog-removal,T," << abrw::format_double(st.horizons[i])
               << ',' << abrw::format_double(st.estimates[i].p_hat) << ','
               << abrw::format_double(st.estimates[i].ci.lo) << ','
               << abrw::format_double(st.estimates[i].ci.hi) << '\n';
    }
    {
        abrw::SimConfig c = cfg;
        c.d = 2;
        c.mu_A = 8.0;
        c.L = std::min(cfg.L, 16);
        auto st = abrw::frog_reinsertion_survival(c, {1.0, 10.0, 100.0}, 50.0,
                                                  replicas);
        for (std::size_t i = 0; i < st.lambdas.size(); ++i)
            os << "frog-reinsertion,lambda,"
               << abrw::format_double(st.lambdas[i]) << ','
               << abrw::format_double(st.estimates[i].p_hat) << ','
               << abrw::format_double(st.estimates[i].ci.lo) << ','
               << abrw::format_double(st.estimates[i].ci.hi) << '\n';
    }
    {
        auto st = abrw::mass_bound_check(2, 8.0, cfg.seed, 8, {2, 4, 6},
                                         std::min(replicas, 200));
        for (std::size_t i = 0; i < st.k0.size(); ++i)
            os << "mass-bound,k0," << st.k0[i] << ','
               << abrw::format_double(st.violation_freq[i]) << ",,\n";
    }
    {
        abrw::SimConfig c = cfg;
        c.d = 1;
        c.L = std::max(c.L, 300);
        auto st = abrw::pedestal_extinction(c, 1, {0.05, 0.2, 1.0}, 50.0,
                                            replicas);
        for (std::size_t i = 0; i < st.lambdas.size(); ++i)
            os << "pedestal,lambda," << abrw::format_double(st.lambdas[i])
               << ',' << abrw::format_double(st.estimates[i].p_hat) << ','
               << abrw::format_double(st.estimates[i].ci.lo) << ','
               << abrw::format_double(st.estimates[i].ci.hi) << '\n';
    }
    if (out.empty()) {
        std::cout << os.str();
    } else {
        write_file(out / "variants.csv", os.str());
        write_manifest(out, "variants", cfg, args, {"variants.csv"});
    }
    return 0;
}

int do_converge(const abrw::SimConfig& cfg, int replicas, const fs::path& out,
                const json& args) {
    std::ostringstream os;
    auto wd = abrw::window_doubling(cfg, cfg.T, replicas);
    os << "check,param,p_hat,ci_lo,ci_hi\n";
    os << "window,L=" << cfg.L << ','
       << abrw::format_double(wd.small_window.p_hat) << ','
       << abrw::format_double(wd.small_window.ci.lo) << ','
       << abrw::format_double(wd.small_window.ci.hi) << '\n';
    os << "window,L=" << 2 * cfg.L << ','
       << abrw::format_double(wd.big_window.p_hat) << ','
       << abrw::format_double(wd.big_window.ci.lo) << ','
       << abrw::format_double(wd.big_window.ci.hi) << '\n';
    auto dc = abrw::discretization_convergence(cfg, {4, 16, 64}, cfg.T, replicas);
    for (std::size_t i = 0; i < dc.n_values.size(); ++i)
        os << "discrete,n=" << dc.n_values[i] << ','
           << abrw::format_double(dc.discrete[i].p_hat) << ','
           << abrw::format_double(dc.discrete[i].ci.lo) << ','
           << abrw::format_double(dc.discrete[i].ci.hi) << '\n';
    os << "discrete,continuous," << abrw::format_double(dc.continuous.p_hat)
       << ',' << abrw::format_double(dc.continuous.ci.lo) << ','
       << abrw::format_double(dc.continuous.ci.hi) << '\n';
    if (out.empty()) {
        std::cout << os.str();
    } else {
        write_file(out / "converge.csv", os.str());
        write_manifest(out, "converge", cfg, args, {"converge.csv"});
    }
    return 0;
}

int do_rerun(const fs::path& manifest_path, const fs::path& out) {
    std::ifstream in(manifest_path);
    if (!in) throw CliError("cannot open manifest " + manifest_path.string());
    json m = json::parse(in);
    abrw::SimConfig cfg;
    config_from_json(cfg, m["config"]);
    const json& a = m["args"];
    std::string sub = m["subcommand"].get<std::string>();
    if (sub == "simulate")
        return do_simulate(cfg, a["replicas"].get<int>(), out, a);
    if (sub == "sweep")
        return do_sweep(cfg, a["lambdas"].get<std::vector<double>>(),
                        a["replicas"].get<int>(), a["bisect"].get<int>(), out, a);
    if (sub == "couple")
        return do_couple(cfg, a["check"].get<std::string>(),
                         a["lambda1"].get<double>(), a["lambda2"].get<double>(),
                         a["seeds"].get<int>(), out, a);
    if (sub == "jpath")
        return do_jpath(cfg, a["times"].get<std::vector<double>>(),
                        a["replicas"].get<int>(), out, a);
    if (sub == "blocks")
        return do_blocks(cfg, a["layers"].get<int>(), a["radius"].get<int>(),
                         a["runs"].get<int>(), out, a);
    if (sub == "boundary-check")
        return do_boundary_check(a["dim"].get<int>(), a["max_size"].get<int>(),
                                 a["random_sets"].get<int>(),
                                 a["random_size"].get<int>(),
                                 a["seed"].get<uint64_t>(), out, a);
    if (sub == "variants")
        return do_variants(cfg, a["replicas"].get<int>(), out, a);
    if (sub == "converge")
        return do_converge(cfg, a["replicas"].get<int>(), out, a);
    throw CliError("manifest names unknown subcommand '" + sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice infection process simulator and analysis toolkit"};
    app.require_subcommand(1);

    abrw::SimConfig cfg;
    std::string config_file, out_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "config file (key = value)");
        sub->add_option("--dim", cfg.d, "lattice dimension d");
        sub->add_option("--jump-rate", cfg.D, "walk jump rate D");
        sub->add_option("--lambda", cfg.lambda, "recuperation rate");
        sub->add_option("--muA", cfg.mu_A, "mean initial A-density");
        sub->add_option("--window", cfg.L, "window radius L");
        sub->add_option("--T", cfg.T, "time horizon");
        sub->add_option("--seed", cfg.seed, "master seed");
        sub->add_option("--out", out_dir, "output directory");
    };

    // simulate
    auto* sim = app.add_subcommand("simulate", "run replicas, emit summaries");
    int sim_replicas = 1;
    std::string sim_variant = "standard";
    add_common(sim);
    sim->add_option("--replicas", sim_replicas);
    sim->add_option("--variant", sim_variant);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "coupled rate sweep + bracket");
    std::vector<double> sweep_lambdas{0.01, 0.1, 1.0, 10.0};
    int sweep_replicas = 100, sweep_bisect = 0;
    add_common(sweep);
    sweep->add_option("--lambdas", sweep_lambdas);
    sweep->add_option("--replicas", sweep_replicas);
    sweep->add_option("--bisect", sweep_bisect);

    // couple
    auto* couple = app.add_subcommand("couple", "exact coupling checks");
    std::string couple_check = "rate";
    double couple_l1 = 0.5, couple_l2 = 2.0;
    int couple_seeds = 20;
    add_common(couple);
    couple->add_option("--check", couple_check, "rate | norecup | initial");
    couple->add_option("--lambda1", couple_l1);
    couple->add_option("--lambda2", couple_l2);
    couple->add_option("--seeds", couple_seeds);

    // jpath
    auto* jpath = app.add_subcommand("jpath", "maximal-jump functional sweep");
    std::vector<double> jpath_times{100.0, 200.0, 400.0};
    int jpath_replicas = 10;
    add_common(jpath);
    jpath->add_option("--times", jpath_times);
    jpath->add_option("--replicas", jpath_replicas);

    // blocks
    auto* blocks = app.add_subcommand("blocks", "block edge certification");
    int blocks_layers = 3, blocks_radius = 2, blocks_runs = 5;
    add_common(blocks);
    blocks->add_option("--layers", blocks_layers);
    blocks->add_option("--radius", blocks_radius);
    blocks->add_option("--runs", blocks_runs);

    // boundary-check
    auto* bc = app.add_subcommand("boundary-check",
                                  "exterior boundary property verification");
    int bc_dim = 2, bc_max = 5, bc_rand = 200, bc_rand_size = 12;
    uint64_t bc_seed = 1;
    std::string bc_out;
    bc->add_option("--dim", bc_dim, "space-time dimension d+1");
    bc->add_option("--max-size", bc_max);
    bc->add_option("--random-sets", bc_rand);
    bc->add_option("--random-size", bc_rand_size);
    bc->add_option("--seed", bc_seed);
    bc->add_option("--out", bc_out);

    // variants
    auto* variants = app.add_subcommand("variants", "frog and mass studies");
    int var_replicas = 200;
    add_common(variants);
    variants->add_option("--replicas", var_replicas);

    // converge
    auto* conv = app.add_subcommand("converge", "window and time-step checks");
    int conv_replicas = 100;
    add_common(conv);
    conv->add_option("--replicas", conv_replicas);

    // rerun
    auto* rerun = app.add_subcommand("rerun", "re-dispatch from a manifest");
    std::string rerun_manifest, rerun_out;
    rerun->add_option("manifest", rerun_manifest)->required();
    rerun->add_option("--out", rerun_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) {
            abrw::SimConfig file_cfg;
            load_config_file(file_cfg, config_file);
            // flags already parsed into cfg override file values where the
            // user passed them; simplest faithful merge: reload flags on top
            abrw::SimConfig merged = file_cfg;
            for (CLI::App* sub :
                 {sim, sweep, couple, jpath, blocks, variants, conv}) {
                if (!sub->parsed()) continue;
                auto override_if = [&](const char* name, auto& dst, auto& src) {
                    if (sub->count(name)) dst = src;
                };
                override_if("--dim", merged.d, cfg.d);
                override_if("--jump-rate", merged.D, cfg.D);
                override_if("--lambda", merged.lambda, cfg.lambda);
                override_if("--muA", merged.mu_A, cfg.mu_A);
                override_if("--window", merged.L, cfg.L);
                override_if("--T", merged.T, cfg.T);
                override_if("--seed", merged.seed, cfg.seed);
            }
            cfg = merged;
        }
        fs::path out(out_dir);
        if (sim->parsed()) {
            auto v = abrw::variant_from_name(sim_variant);
            if (!v) throw CliError("unknown variant '" + sim_variant + "'");
            cfg.variant = *v;
            json a{{"replicas", sim_replicas}};
            return do_simulate(cfg, sim_replicas, out, a);
        }
        if (sweep->parsed()) {
            json a{{"lambdas", sweep_lambdas},
                   {"replicas", sweep_replicas},
                   {"bisect", sweep_bisect}};
            return do_sweep(cfg, sweep_lambdas, sweep_replicas, sweep_bisect,
                            out, a);
        }
        if (couple->parsed()) {
            json a{{"check", couple_check},
                   {"lambda1", couple_l1},
                   {"lambda2", couple_l2},
                   {"seeds", couple_seeds}};
            return do_couple(cfg, couple_check, couple_l1, couple_l2,
                             couple_seeds, out, a);
        }
        if (jpath->parsed()) {
            json a{{"times", jpath_times}, {"replicas", jpath_replicas}};
            return do_jpath(cfg, jpath_times, jpath_replicas, out, a);
        }
        if (blocks->parsed()) {
            json a{{"layers", blocks_layers},
                   {"radius", blocks_radius},
                   {"runs", blocks_runs}};
            return do_blocks(cfg, blocks_layers, blocks_radius, blocks_runs,
                             out, a);
        }
        if (bc->parsed()) {
            json a{{"dim", bc_dim},
                   {"max_size", bc_max},
                   {"random_sets", bc_rand},
                   {"random_size", bc_rand_size},
                   {"seed", bc_seed}};
            return do_boundary_check(bc_dim, bc_max, bc_rand, bc_rand_size,
                                     bc_seed, fs::path(bc_out), a);
        }
        if (variants->parsed()) {
            json a{{"replicas", var_replicas}};
            return do_variants(cfg, var_replicas, out, a);
        }
        if (conv->parsed()) {
            json a{{"replicas", conv_replicas}};
            return do_converge(cfg, conv_replicas, out, a);
        }
        if (rerun->parsed()) {
            return do_rerun(fs::path(rerun_manifest), fs::path(rerun_out));
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
