#include "abrw/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace abrw {

const std::vector<uint32_t> Engine::kNoOccupants;

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Standard: return "standard";
        case Variant::Coincidence: return "coincidence-infection";
        case Variant::InstantNoRecup: return "no-recuperation-instant";
        case Variant::FrogRemoval: return "frog-removal";
        case Variant::FrogReinsertion: return "frog-reinsertion";
        case Variant::DiscreteN: return "discrete-n";
    }
    return "?";
}

std::optional<Variant> variant_from_name(const std::string& name) {
    for (Variant v :
         {Variant::Standard, Variant::Coincidence, Variant::InstantNoRecup,
          Variant::FrogRemoval, Variant::FrogReinsertion, Variant::DiscreteN})
        if (name == variant_name(v)) return v;
    return std::nullopt;
}

void SimConfig::validate() const {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("d must be in [1,3]");
    if (D <= 0.0) throw std::invalid_argument("jump rate D must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (mu_A < 0.0) throw std::invalid_argument("mu_A must be >= 0");
    if (L < 1) throw std::invalid_argument("window radius L must be >= 1");
    if (T < 0.0) throw std::invalid_argument("horizon T must be >= 0");
    if (variant == Variant::DiscreteN) {
        if (n < 1) throw std::invalid_argument("discrete-n needs n >= 1");
        if (D / n > 1.0)
            throw std::invalid_argument("discrete-n needs D/n <= 1");
    }
    if (lambda_ref > 0.0 && effective_lambda() > lambda_ref + 1e-12)
        throw std::invalid_argument("lambda exceeds master clock rate");
    for (const Site& s : resolved_seed_sites()) {
        if (static_cast<int>(s.size()) != d)
            throw std::invalid_argument("seed site dimension mismatch");
        if (linf_norm(s) > L)
            throw std::invalid_argument("seed site outside the window");
    }
}

std::vector<Site> SimConfig::resolved_seed_sites() const {
    switch (seed_mode) {
        case SeedMode::OneAtOrigin: return {Site(d, 0)};
        case SeedMode::OneAtMidpoint: {
            LatticeConfig lc{d, C0};
            return {midpoint(Site(d, 0), p, lc)};
        }
        case SeedMode::ExplicitSites: return seed_sites;
        case SeedMode::None: return {};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Ids and site packing
// ---------------------------------------------------------------------------

namespace {
constexpr int kCoordBias = 0x8000;
constexpr int kCoordMax = 0x7FFF;
}  // namespace

uint64_t pack_pid(const Site& site, uint32_t slot, uint32_t tag) {
    assert(site.size() <= kMaxDim);
    assert(slot < (1u << 12) && tag < (1u << 4));
    uint64_t pid = 0;
    for (std::size_t s = 0; s < site.size(); ++s) {
        assert(std::abs(site[s]) <= kCoordMax);
        pid |= static_cast<uint64_t>(site[s] + kCoordBias) << (16 * s);
    }
    pid |= static_cast<uint64_t>(slot) << 48;
    pid |= static_cast<uint64_t>(tag) << 60;
    return pid;
}

Site unpack_pid_site(uint64_t pid, int d) {
    Site x(d);
    for (int s = 0; s < d; ++s)
        x[s] = static_cast<int>((pid >> (16 * s)) & 0xFFFF) - kCoordBias;
    return x;
}

int64_t pack_site(const Site& x) {
    assert(x.size() <= kMaxDim);
    int64_t code = 0;
    for (std::size_t s = 0; s < x.size(); ++s) {
        assert(std::abs(x[s]) <= kCoordMax);
        code |= static_cast<int64_t>(x[s] + kCoordBias) << (16 * s);
    }
    return code;
}

Site unpack_site(int64_t code, int d) {
    Site x(d);
    for (int s = 0; s < d; ++s)
        x[s] = static_cast<int>((code >> (16 * s)) & 0xFFFF) - kCoordBias;
    return x;
}

// ---------------------------------------------------------------------------
// Initial census
// ---------------------------------------------------------------------------

Census build_census(const SimConfig& cfg) {
    cfg.validate();
    Census census;
    if (cfg.mu_A > 0.0) {
        // Window scan in lexicographic coordinate order.
        std::vector<Site> sites;
        Site cur(cfg.d, -cfg.L);
        for (;;) {
            sites.push_back(cur);
            int axis = cfg.d - 1;
            while (axis >= 0 && cur[axis] == cfg.L) cur[axis--] = -cfg.L;
            if (axis < 0) break;
            ++cur[axis];
        }
        std::vector<uint64_t> ids(sites.size());
        for (std::size_t i = 0; i < sites.size(); ++i)
            ids[i] = pack_pid(sites[i], 0, 0);
        std::vector<uint32_t> counts =
            sample_poisson_counts(cfg.seed, ids, cfg.mu_A);
        for (std::size_t i = 0; i < sites.size(); ++i)
            for (uint32_t slot = 0; slot < counts[i]; ++slot)
                census.push_back(
                    {pack_pid(sites[i], slot, 0), sites[i], PType::A, false});
    }
    std::unordered_map<int64_t, uint32_t> added_at;
    for (const Site& s : cfg.resolved_seed_sites()) {
        uint32_t slot = added_at[pack_site(s)]++;
        census.push_back({pack_pid(s, slot, 1), s, PType::B, true});
    }
    return census;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

Engine::Engine(const SimConfig& cfg) : Engine(cfg, build_census(cfg)) {}

Engine::Engine(const SimConfig& cfg, Census census) : cfg_(cfg) {
    cfg_.validate();
    lat_ = LatticeConfig{cfg_.d, cfg_.C0};
    init(std::move(census));
}

void Engine::wrap_into_window(Site& x) const {
    if (cfg_.boundary != Boundary::Torus) return;
    const int M = 2 * cfg_.L + 1;
    for (int s = 0; s < cfg_.d; ++s) {
        int r = (x[s] + cfg_.L) % M;
        if (r < 0) r += M;
        x[s] = r - cfg_.L;
    }
}

int64_t Engine::packed_of(const std::array<int, kMaxDim>& c) const {
    Site x(cfg_.d);
    for (int s = 0; s < cfg_.d; ++s) x[s] = c[s];
    wrap_into_window(x);
    return pack_site(x);
}

Site Engine::position(uint32_t idx) const {
    Site x(cfg_.d);
    for (int s = 0; s < cfg_.d; ++s) x[s] = pos_[idx][s];
    wrap_into_window(x);
    return x;
}

int64_t Engine::packed_position(uint32_t idx) const {
    return packed_of(pos_[idx]);
}

const std::vector<uint32_t>& Engine::occupants(int64_t packed_site) const {
    auto it = occ_.find(static_cast<uint64_t>(packed_site));
    return it == occ_.end() ? kNoOccupants : it->second;
}

std::optional<uint32_t> Engine::index_of(uint64_t pid) const {
    auto it = pid_to_idx_.find(pid);
    if (it == pid_to_idx_.end()) return std::nullopt;
    return it->second;
}

ClockParams Engine::clock_params(uint32_t idx) const {
    double ref = cfg_.clock_rate_ref();
    double lam = cfg_.effective_lambda();
    return ClockParams{cfg_.seed, pid_[idx], ref, ref > 0.0 ? lam / ref : 0.0};
}

void Engine::init(Census census) {
    const auto n = census.size();
    pid_.reserve(n);
    pos_.reserve(n);
    type_.reserve(n);
    for (const CensusEntry& e : census) {
        uint32_t idx = static_cast<uint32_t>(pid_.size());
        pid_.push_back(e.pid);
        std::array<int, kMaxDim> c{0, 0, 0};
        for (int s = 0; s < cfg_.d; ++s) c[s] = e.site[s];
        pos_.push_back(c);
        type_.push_back(e.type);
        seed_added_.push_back(e.seed_added ? 1 : 0);
        pid_to_idx_[e.pid] = idx;
        occ_[static_cast<uint64_t>(packed_of(c))].push_back(idx);
    }
    next_jump_.assign(n, kInfTime);
    next_dir_.assign(n, 0);
    walk_ctr_.assign(n, 0);
    sched_tick_.assign(n, kInfTime);
    cached_tick_.assign(n, 0.0);

    seed_center_.assign(cfg_.d, 0);
    auto seeds = cfg_.resolved_seed_sites();
    if (!seeds.empty()) seed_center_ = seeds[0];

    // Time-0 conversions. The coincidence-rule variants always start from
    // the state with every particle at a B-occupied site of type B; the
    // jump-required variants convert co-located A's only when asked to.
    std::vector<Event> init_events;
    bool convert = cfg_.convert_at_seed || cfg_.coincidence_rules();
    if (convert) {
        std::unordered_map<uint64_t, uint32_t> b_site;  // site -> smallest-pid B
        for (uint32_t i = 0; i < pid_.size(); ++i) {
            if (type_[i] != PType::B) continue;
            uint64_t s = static_cast<uint64_t>(packed_of(pos_[i]));
            auto it = b_site.find(s);
            if (it == b_site.end() || pid_[i] < pid_[it->second]) b_site[s] = i;
        }
        for (uint32_t i = 0; i < pid_.size(); ++i) {
            if (type_[i] != PType::A) continue;
            auto it = b_site.find(static_cast<uint64_t>(packed_of(pos_[i])));
            if (it == b_site.end()) continue;
            type_[i] = PType::B;
            Event ev;
            ev.time = 0.0;
            ev.kind = EventKind::Infection;
            ev.actor = it->second;
            ev.target = i;
            ev.to = packed_of(pos_[i]);
            ev.from = ev.to;
            init_events.push_back(ev);
        }
    }

    for (uint32_t i = 0; i < pid_.size(); ++i)
        if (type_[i] == PType::B) ++b_count_;
    sum_.max_b = b_count_;
    if (b_count_ == 0) sum_.extinction_time = 0.0;

    if (cfg_.variant != Variant::DiscreteN) {
        for (uint32_t i = 0; i < pid_.size(); ++i) {
            if (!cfg_.frozen_a() || type_[i] == PType::B) schedule_jump(i, 0.0);
            if (type_[i] == PType::B) {
                if (cfg_.coincidence_rules()) {
                    if (occupants(packed_of(pos_[i])).size() == 1)
                        schedule_tick_from(i, 0.0);
                } else {
                    schedule_tick_from(i, 0.0);
                }
            }
        }
    } else {
        for (uint32_t i = 0; i < pid_.size(); ++i)
            if (type_[i] == PType::B)
                cached_tick_[i] = next_tick_geq(clock_params(i), 0.0, cfg_.T);
    }

    // Stash the conversion records until a log is attached.
    pending_init_ = std::move(init_events);
}

void Engine::schedule_jump(uint32_t idx, double from_time) {
    double gap = exponential(
        1.0 / cfg_.D,
        draw_u64({cfg_.seed, pid_[idx], Purpose::WalkGap, walk_ctr_[idx]}));
    uint8_t dir = static_cast<uint8_t>(uniform_below(
        2 * cfg_.d,
        draw_u64({cfg_.seed, pid_[idx], Purpose::WalkDir, walk_ctr_[idx]})));
    ++walk_ctr_[idx];
    next_jump_[idx] = from_time + gap;
    next_dir_[idx] = dir;
    heap_.push_back({next_jump_[idx], idx, 0});
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
}

void Engine::schedule_tick_from(uint32_t idx, double t) {
    double tk = next_tick_geq(clock_params(idx), t, cfg_.T);
    sched_tick_[idx] = tk;
    if (tk != kInfTime) {
        heap_.push_back({tk, idx, 1});
        std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    }
}

void Engine::emit(const Event& ev, std::vector<Event>* log,
                  const Observer* obs) {
    ++sum_.n_events;
    if (log) log->push_back(ev);
    if (obs && *obs) (*obs)(*this, ev);
}

void Engine::make_b(uint32_t idx, uint32_t infector, double t,
                    std::vector<Event>* log, const Observer* obs) {
    assert(type_[idx] == PType::A);
    type_[idx] = PType::B;
    ++b_count_;
    sum_.max_b = std::max(sum_.max_b, b_count_);
    {
        Site w = position(idx);
        Site rel(cfg_.d);
        for (int s = 0; s < cfg_.d; ++s) rel[s] = w[s] - seed_center_[s];
        sum_.b_extent = std::max(sum_.b_extent, linf_norm(rel));
    }
    Event ev;
    ev.time = t;
    ev.kind = EventKind::Infection;
    ev.actor = infector;
    ev.target = idx;
    ev.to = packed_of(pos_[idx]);
    ev.from = ev.to;
    emit(ev, log, obs);
    if (cfg_.variant == Variant::DiscreteN) {
        cached_tick_[idx] = next_tick_geq(clock_params(idx), t, cfg_.T);
        return;
    }
    if (cfg_.frozen_a()) schedule_jump(idx, t);
    if (!cfg_.coincidence_rules()) schedule_tick_from(idx, t);
    // Coincidence rules: the particle is co-located with its infector, so a
    // tick could not take effect yet; the alone hooks schedule one later.
}

void Engine::resolve_coincidence(int64_t packed_site, double t,
                                 std::vector<Event>* log, const Observer* obs) {
    const auto& occ = occupants(packed_site);
    uint32_t infector = 0;
    bool has_b = false, has_a = false;
    for (uint32_t i : occ) {
        if (type_[i] == PType::B) {
            if (!has_b || pid_[i] < pid_[infector]) infector = i;
            has_b = true;
        } else if (type_[i] == PType::A) {
            has_a = true;
        }
    }
    if (!has_b || !has_a) return;
    // Copy: make_b does not change occupancy, but be explicit about it.
    std::vector<uint32_t> targets;
    for (uint32_t i : occ)
        if (type_[i] == PType::A) targets.push_back(i);
    for (uint32_t i : targets) make_b(i, infector, t, log, obs);
}

void Engine::alone_hook(int64_t packed_site, double t) {
    if (!cfg_.coincidence_rules()) return;
    const auto& occ = occupants(packed_site);
    if (occ.size() != 1) return;
    uint32_t i = occ[0];
    if (type_[i] == PType::B && sched_tick_[i] == kInfTime)
        schedule_tick_from(i, t);
}

void Engine::note_extinction_state(double t) {
    if (b_count_ == 0 && sum_.extinction_time < 0.0) sum_.extinction_time = t;
}

void Engine::process_jump(uint32_t idx, double t, std::vector<Event>* log,
                          const Observer* obs) {
    const int axis = next_dir_[idx] >> 1;
    const int delta = (next_dir_[idx] & 1) ? 1 : -1;
    int64_t from = packed_of(pos_[idx]);
    std::array<int, kMaxDim> np = pos_[idx];
    np[axis] += delta;
    if (cfg_.boundary == Boundary::Reflecting &&
        std::abs(np[axis]) > cfg_.L) {
        np = pos_[idx];  // blocked at the wall; the jump is spent in place
    }
    pos_[idx] = np;
    int64_t to = packed_of(pos_[idx]);
    if (to != from) {
        auto& src = occ_[static_cast<uint64_t>(from)];
        src.erase(std::find(src.begin(), src.end(), idx));
        occ_[static_cast<uint64_t>(to)].push_back(idx);
    }
    Event ev;
    ev.time = t;
    ev.kind = EventKind::Jump;
    ev.actor = idx;
    ev.from = from;
    ev.to = to;
    emit(ev, log, obs);

    if (cfg_.coincidence_rules()) {
        resolve_coincidence(to, t, log, obs);
        alone_hook(from, t);
        alone_hook(to, t);
    } else {
        const auto& occ = occupants(to);
        if (type_[idx] == PType::B) {
            std::vector<uint32_t> targets;
            for (uint32_t i : occ)
                if (type_[i] == PType::A) targets.push_back(i);
            for (uint32_t i : targets) make_b(i, idx, t, log, obs);
        } else if (type_[idx] == PType::A) {
            bool has_b = false;
            uint32_t infector = 0;
            for (uint32_t i : occ) {
                if (i != idx && type_[i] == PType::B) {
                    if (!has_b || pid_[i] < pid_[infector]) infector = i;
                    has_b = true;
                }
            }
            if (has_b) make_b(idx, infector, t, log, obs);
        }
    }

    if (!cfg_.frozen_a() || type_[idx] == PType::B) schedule_jump(idx, t);
    else next_jump_[idx] = kInfTime;
}

void Engine::process_tick(uint32_t idx, double t, std::vector<Event>* log,
                          const Observer* obs) {
    Event ev;
    ev.time = t;
    ev.kind = EventKind::Tick;
    ev.actor = idx;
    ev.from = ev.to = packed_of(pos_[idx]);
    emit(ev, log, obs);
    sched_tick_[idx] = kInfTime;
    if (cfg_.coincidence_rules() &&
        occupants(packed_of(pos_[idx])).size() > 1) {
        // Co-located particles share a type here, so the recuperation try is
        // undone instantly; the next opportunity comes when alone again.
        return;
    }
    type_[idx] =
        cfg_.variant == Variant::FrogRemoval ? PType::Immune : PType::A;
    --b_count_;
    Event rec;
    rec.time = t;
    rec.kind = EventKind::Recovery;
    rec.actor = idx;
    rec.from = rec.to = ev.to;
    emit(rec, log, obs);
    if (cfg_.frozen_a()) next_jump_[idx] = kInfTime;
    note_extinction_state(t);
}

double Engine::next_event_time() {
    while (!heap_.empty()) {
        const QItem& top = heap_.front();
        bool valid =
            top.kind == 0
                ? (top.time == next_jump_[top.idx] &&
                   (!cfg_.frozen_a() || type_[top.idx] == PType::B))
                : (top.time == sched_tick_[top.idx] &&
                   type_[top.idx] == PType::B);
        if (valid) return top.time > cfg_.T ? kInfTime : top.time;
        std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
        heap_.pop_back();
    }
    return kInfTime;
}

bool Engine::step(std::vector<Event>& out) {
    double t = next_event_time();
    if (t == kInfTime) return false;
    QItem item = heap_.front();
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
    heap_.pop_back();
    if (item.time == last_pop_time_ && item.idx != last_pop_idx_)
        ++sum_.time_ties;
    last_pop_time_ = item.time;
    last_pop_idx_ = item.idx;
    clock_ = item.time;
    const Observer* no_obs = nullptr;
    if (!pending_init_.empty()) {
        for (const Event& e : pending_init_) out.push_back(e);
        pending_init_.clear();
    }
    if (item.kind == 0)
        process_jump(item.idx, item.time, &out, no_obs);
    else
        process_tick(item.idx, item.time, &out, no_obs);
    return true;
}

void Engine::advance_clock(double t) {
    if (t > clock_) clock_ = t;
}

void Engine::run_to(double t, std::vector<Event>* log,
                    const Observer* observer) {
    if (t > cfg_.T) throw std::invalid_argument("run_to beyond horizon");
    if (!pending_init_.empty()) {
        for (const Event& e : pending_init_) emit(e, log, observer);
        pending_init_.clear();
    }
    if (cfg_.variant == Variant::DiscreteN) {
        run_discrete(t, log, observer);
        return;
    }
    for (;;) {
        if (cfg_.stop_on_extinction && b_count_ == 0) break;
        double nt = next_event_time();
        if (nt > t) break;
        QItem item = heap_.front();
        std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
        heap_.pop_back();
        if (item.time == last_pop_time_ && item.idx != last_pop_idx_)
            ++sum_.time_ties;
        last_pop_time_ = item.time;
        last_pop_idx_ = item.idx;
        clock_ = item.time;
        if (item.kind == 0)
            process_jump(item.idx, item.time, log, observer);
        else
            process_tick(item.idx, item.time, log, observer);
    }
    if (heap_.empty() && !pid_.empty() && !cfg_.frozen_a() && t < cfg_.T)
        throw std::logic_error("event queue drained with particles remaining");
    clock_ = std::max(clock_, t);
}

void Engine::run_discrete(double t_end, std::vector<Event>* log,
                          const Observer* obs) {
    const int n = cfg_.n;
    const double p_jump = cfg_.D / n;
    int64_t j = static_cast<int64_t>(std::floor(clock_ * n + 1e-9)) + 1;
    std::vector<uint8_t> moved(pid_.size(), 0);
    std::vector<uint32_t> movers;
    for (; static_cast<double>(j) / n <= t_end; ++j) {
        if (cfg_.stop_on_extinction && b_count_ == 0) break;
        const double st = static_cast<double>(j) / n;
        // recuperation ticks strictly before the synchronized move
        for (uint32_t i = 0; i < pid_.size(); ++i) {
            if (type_[i] != PType::B) continue;
            if (cached_tick_[i] > st) continue;
            double tk = cached_tick_[i];
            clock_ = tk;
            Event ev;
            ev.time = tk;
            ev.kind = EventKind::Tick;
            ev.actor = i;
            ev.from = ev.to = packed_of(pos_[i]);
            emit(ev, log, obs);
            type_[i] = PType::A;
            --b_count_;
            ev.kind = EventKind::Recovery;
            emit(ev, log, obs);
            note_extinction_state(tk);
        }
        clock_ = st;
        // synchronized moves
        movers.clear();
        std::fill(moved.begin(), moved.end(), 0);
        for (uint32_t i = 0; i < pid_.size(); ++i) {
            double u = uniform01(draw_u64({cfg_.seed, pid_[i],
                                           Purpose::DiscreteStep,
                                           static_cast<uint64_t>(j)}));
            if (u >= p_jump) continue;
            int dir = static_cast<int>(u / p_jump * 2 * cfg_.d);
            dir = std::min(dir, 2 * cfg_.d - 1);
            int64_t from = packed_of(pos_[i]);
            std::array<int, kMaxDim> np = pos_[i];
            np[dir >> 1] += (dir & 1) ? 1 : -1;
            if (cfg_.boundary == Boundary::Reflecting &&
                std::abs(np[dir >> 1]) > cfg_.L)
                np = pos_[i];
            pos_[i] = np;
            int64_t to = packed_of(pos_[i]);
            if (to != from) {
                auto& src = occ_[static_cast<uint64_t>(from)];
                src.erase(std::find(src.begin(), src.end(), i));
                occ_[static_cast<uint64_t>(to)].push_back(i);
            }
            moved[i] = 1;
            movers.push_back(i);
            Event ev;
            ev.time = st;
            ev.kind = EventKind::Jump;
            ev.actor = i;
            ev.from = from;
            ev.to = to;
            emit(ev, log, obs);
        }
        // jump-required infection on the step's destination sites: an A
        // turns B iff its site holds a B and either the A itself or some B
        // at the site has just moved
        std::vector<int64_t> sites;
        for (uint32_t i : movers) sites.push_back(packed_of(pos_[i]));
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
        for (int64_t scode : sites) {
            const auto& occ = occupants(scode);
            bool b_moved = false, has_b = false;
            uint32_t moved_b = 0, any_b = 0;
            for (uint32_t i : occ) {
                if (type_[i] != PType::B) continue;
                if (!has_b || pid_[i] < pid_[any_b]) any_b = i;
                has_b = true;
                if (moved[i] && (!b_moved || pid_[i] < pid_[moved_b])) {
                    moved_b = i;
                    b_moved = true;
                }
            }
            if (!has_b) continue;
            std::vector<uint32_t> targets;
            for (uint32_t i : occ)
                if (type_[i] == PType::A && (moved[i] || b_moved))
                    targets.push_back(i);
            uint32_t infector = b_moved ? moved_b : any_b;
            for (uint32_t i : targets) make_b(i, infector, st, log, obs);
        }
    }
    clock_ = std::max(clock_, t_end);
}

Snapshot Engine::snapshot() const {
    Snapshot snap;
    snap.time = clock_;
    snap.particles.reserve(pid_.size());
    for (uint32_t i = 0; i < pid_.size(); ++i)
        snap.particles.push_back(
            {pid_[i], i, position(i), type_[i], seed_added_[i] != 0});
    return snap;
}

RunSummary Engine::summary() const {
    RunSummary s = sum_;
    s.survived = b_count_ > 0;
    s.final_b = b_count_;
    return s;
}

LoggedRun run_logged(const SimConfig& cfg) {
    LoggedRun lr;
    lr.cfg = cfg;
    lr.census = build_census(cfg);
    Engine e(cfg, lr.census);
    e.run_to(cfg.T, &lr.events, nullptr);
    return lr;
}

RunSummary run_summary_only(const SimConfig& cfg) {
    Engine e(cfg);
    e.run_to(cfg.T, nullptr, nullptr);
    return e.summary();
}

}  // namespace abrw
