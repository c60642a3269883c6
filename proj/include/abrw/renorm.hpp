// Renormalized-percolation scaffolding on the directed graph of space-time
// blocks: exterior boundary operators with their counting bounds, good
// bottoms, active vertices, the type-reset block process with transmission
// certificates, open clusters, barriers, and the covering-set construction.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "abrw/engine.hpp"
#include "abrw/genealogy.hpp"
#include "abrw/lattice.hpp"

namespace abrw {

// ---------------------------------------------------------------------------
// Finite subsets of Z^(d+1). Points are packed 16 bits per coordinate.
// ---------------------------------------------------------------------------

using Point = std::vector<int>;  // length dim (= d+1 for space-time sets)

int64_t pack_point(const Point& p);
Point unpack_point(int64_t code, int dim);

struct PointSet {
    int dim = 2;
    std::unordered_set<int64_t> pts;

    bool contains(const Point& p) const { return pts.count(pack_point(p)) != 0; }
    void insert(const Point& p) { pts.insert(pack_point(p)); }
    std::size_t size() const { return pts.size(); }
};

enum class Adjacency { LInf, NearestNeighbor };

// Neighbors of p under the given adjacency.
std::vector<Point> neighbors(const Point& p, Adjacency adj);

bool is_connected(const PointSet& s, Adjacency adj);

// Exterior boundary pieces of a finite set A: vertices outside A that touch
// A and can reach infinity avoiding A ("reach infinity" is decided by a
// flood fill to the bounding box of A inflated by two, using path_adj).
struct BoundarySets {
    PointSet ext, ext_plus, ext_star;
};
BoundarySets ext_boundary(const PointSet& a, Adjacency path_adj = Adjacency::LInf);

// Does S block every path_adj-path from A to infinity?
bool separates_from_infinity(const PointSet& a, const PointSet& s,
                             Adjacency path_adj = Adjacency::LInf);

// Boundary property report: the exterior boundary of a finite nonempty
// sup-norm-connected subset of the upper half-space is connected, separates
// the set from infinity, and obeys |ext| <= 6 |ext+| and |ext*| <= |ext+|.
struct BoundaryReport {
    bool connected = false;
    bool separates = false;
    bool card_six = false;
    bool card_star = false;
    std::size_t ext_size = 0, plus_size = 0, star_size = 0;
    std::string detail;
    bool pass() const { return connected && separates && card_six && card_star; }
};
BoundaryReport check_exterior_boundary(const PointSet& a,
                                       Adjacency conn_adj = Adjacency::LInf,
                                       Adjacency path_adj = Adjacency::LInf);

// Per vertical line, up-transitions from the unbounded complement component
// into A match up-transitions out of A; returns false on any imbalance.
bool vertical_transition_balance(const PointSet& a,
                                 Adjacency path_adj = Adjacency::LInf);

// Enumeration helpers (acceptance and tests). Cells of the box are
// [0,ext0) x ... ; calls fn for every connected subset of size in
// [1, max_size] under LInf adjacency.
void for_each_connected_subset(const std::vector<int>& extents, int max_size,
                               const std::function<void(const PointSet&)>& fn);

// Random connected set containing the origin, grown inside the upper
// half-space (last coordinate >= 0), exactly `size` points.
PointSet random_connected_halfspace_set(int dim, int size, uint64_t seed,
                                        uint64_t index);

// ---------------------------------------------------------------------------
// Bottoms, active vertices and the reset process
// ---------------------------------------------------------------------------

// Mass test on the bottom of a scale-p block: every aligned-or-not cube of
// side C0^p inside the bottom must hold at least gamma0 * mu_A * C0^(dp)
// particles, counting all non-seed-added particles regardless of type.
bool good_bottom(const Snapshot& snap, const Site& block_i, int p,
                 double gamma0, double mu_A, const LatticeConfig& lat,
                 const SimConfig& win);

// A vertex is active when some site of midpoint(i) + C(side(p)/8) holds a
// B-particle in the snapshot.
bool is_active(const Snapshot& snap, const Site& block_i, int p,
               const LatticeConfig& lat);

// Sup-norm-nearest B-occupied site to the block midpoint, lexicographic
// smallest on ties; nullopt when no B exists anywhere.
std::optional<Site> x_of(const Snapshot& snap, const Site& block_i, int p,
                         const LatticeConfig& lat);

// Transmission witness: switch times inside (t(k), t(k+1)) and the carrier
// particle ids from the reset seed to the arrival particle.
struct Witness {
    std::vector<double> times;
    std::vector<uint64_t> pids;
};

// The type-reset process of a block bottom: particles inside the bottom
// region at t0 evolve along the parent run's logged paths with types
// restarted (one B at x, everyone else A), no recuperation, jump-required
// infection, all outsiders ignored.
class ResetProcess {
  public:
    ResetProcess(const LoggedRun& run, const Snapshot& at_t0,
                 const Region& zone, const Site& x, double t0, double t1);

    bool b_in_cube_at_end(const Site& center, int radius) const;
    // Canonical first witness reaching center + C(radius) at t1, ordered by
    // (length, switch times, carrier pids); nullopt when none arrives.
    std::optional<Witness> first_witness(const Site& center, int radius) const;

    int n_participants() const { return static_cast<int>(members_.size()); }
    uint64_t seed_pid() const { return seed_pid_; }

  private:
    struct Member {
        uint64_t pid;
        uint32_t run_idx;
        int64_t pos;
        bool is_b;
        double onset = -1.0;   // infection time in the reset process
        int parent = -1;       // member index of the infector
    };
    std::vector<Member> members_;
    int seed_member_ = -1;
    uint64_t seed_pid_ = 0;
    int d_;
};

// Edge certificate for the directed edge (i,k) -> (j,k+1).
struct EdgeCertificate {
    bool parent_active = false;
    std::optional<Site> x;
    bool transmission = false;            // reset process reaches the child cube
    std::optional<Witness> witness;
    bool no_recuperation = false;         // witness survives the parent clocks
    bool open = false;
    std::string failed_clause;
};

EdgeCertificate check_edge_open(const LoggedRun& run, const Snapshot& snap_k,
                                const Site& parent_i, int64_t k,
                                const Site& child_j, int p,
                                const LatticeConfig& lat,
                                bool parent_active_by_convention);

// ---------------------------------------------------------------------------
// Cluster, barrier, covering
// ---------------------------------------------------------------------------

// BFS over open directed edges from the seed vertices (always included).
// The oracle receives (parent, child) where child = parent + (step, +1).
using EdgeOracle = std::function<bool(const Point&, const Point&)>;
PointSet open_cluster(const std::vector<Point>& seeds, const EdgeOracle& open,
                      int max_layer);

// Barrier test: connected, separates c0 from infinity, and at least |S|/6
// vertices carry the supplied per-vertex failure flag.
bool is_barrier(const PointSet& s, const PointSet& c0,
                const std::function<bool(const Point&)>& flag,
                Adjacency conn_adj = Adjacency::LInf,
                Adjacency path_adj = Adjacency::LInf);

// Covering construction: a connected index set Lambda whose scale-r boxes
// cover the blocks within distance 4d-1 of S, with the explicit cardinality
// constant 2 * (8d+5)^d * 7.
struct CoveringResult {
    PointSet lambda;
    bool connected = false;
    bool covers = false;
    bool card_ok = false;
    std::size_t size = 0;
    double bound = 0.0;
    bool pass() const { return connected && covers && card_ok; }
};
CoveringResult covering_set(const PointSet& s, int p, int r, int nu,
                            const LatticeConfig& lat);

// ---------------------------------------------------------------------------
// Block certification experiment: simulate the recuperation process seeded
// at the block midpoint, certify every candidate edge, and require that an
// open edge from an active parent always has an active child in the run.
// ---------------------------------------------------------------------------

struct BlockExperimentResult {
    int64_t edges_tested = 0;
    int64_t edges_open = 0;
    int64_t active_vertices = 0;
    int64_t propagation_violations = 0;
};

BlockExperimentResult run_block_experiment(const SimConfig& sim, int layers,
                                           int column_radius);

}  // namespace abrw
