#include <doctest.h>

#include "abrw/lattice.hpp"
#include "abrw/rng.hpp"

using namespace abrw;

TEST_CASE("sup-norm and cubes") {
    CHECK(linf_norm({0, 0}) == 0);
    CHECK(linf_norm({3, -5}) == 5);
    CHECK(linf_norm({-2, -2, -2}) == 2);
    CHECK(cube_contains(1, {1, 1}));
    CHECK_FALSE(cube_contains(1, {2, 0}));
    CHECK(cube_contains(0, {0}));
}

TEST_CASE("block regions at scale 1, side 64") {
    LatticeConfig lat{1, 2};
    CHECK(lat.side(1) == 64);
    CHECK(lat.q() == 3);
    CHECK(lat.layer_duration(1) == 64);  // 1^3 * 64

    SUBCASE("hat block") {
        Region r = block_region({{0}, 0, 1, BlockKind::HatBlock}, lat);
        CHECK(r.lo[0] == 0);
        CHECK(r.hi[0] == 64);
        CHECK(r.t0 == 0);
        CHECK(r.t1 == 64);
        CHECK(r.contains({63}, 63.9));
        CHECK_FALSE(r.contains({64}, 0.0));
        CHECK_FALSE(r.contains({0}, 64.0));
    }
    SUBCASE("bottom") {
        Region r = block_region({{0}, 0, 1, BlockKind::Bottom}, lat);
        CHECK(r.lo[0] == -5 * 64);
        CHECK(r.hi[0] == 6 * 64);
        CHECK(r.t0 == 0);
        CHECK(r.t1 == 0);
        CHECK(r.contains({-320}, 0.0));
        CHECK_FALSE(r.contains({384}, 0.0));
    }
    SUBCASE("pedestal") {
        Region r = block_region({{0}, 1, 1, BlockKind::Pedestal}, lat);
        CHECK(r.lo[0] == -192);
        CHECK(r.hi[0] == 256);
        CHECK(r.t0 == 0);  // (k-1) * side
    }
    SUBCASE("plain block at scale r") {
        Region r = block_region({{2}, 3, 1, BlockKind::RBlock}, lat);
        CHECK(r.lo[0] == 128);
        CHECK(r.hi[0] == 192);
        CHECK(r.t0 == 192);
        CHECK(r.t1 == 256);
    }
}

TEST_CASE("midpoints and layer times") {
    LatticeConfig lat{1, 2};
    CHECK(midpoint({0}, 1, lat) == Site{32});
    CHECK(midpoint({-1}, 1, lat) == Site{-32});
    CHECK(t_of(2, 1, lat) == 128);
    LatticeConfig lat2{2, 2};
    CHECK(midpoint({0, 0}, 1, lat2) == Site{32, 32});
    CHECK(t_of(1, 1, lat2) == 64 * 1);  // q = 5, 1^5 = 1

    LatticeConfig odd{1, 3};
    CHECK_THROWS_AS(midpoint({0}, 1, odd), std::invalid_argument);
    CHECK_THROWS_AS(block_region({{0}, 0, 0, BlockKind::RBlock}, lat),
                    std::invalid_argument);
}

TEST_CASE("half-open blocks partition space-time") {
    LatticeConfig lat{2, 2};
    // random points land in exactly one scale-r block
    for (uint64_t trial = 0; trial < 200; ++trial) {
        uint64_t bits = draw_u64({5, trial, Purpose::ReplicaMix, 0});
        int x = static_cast<int>(bits % 1000) - 500;
        int y = static_cast<int>((bits >> 20) % 1000) - 500;
        double t = static_cast<double>((bits >> 40) % 5000);
        int hits = 0;
        for (int ib = -10; ib <= 10; ++ib)
            for (int jb = -10; jb <= 10; ++jb)
                for (int kb = 0; kb <= 80; ++kb) {
                    Region r = block_region({{ib, jb}, kb, 1, BlockKind::RBlock},
                                            lat);
                    if (r.contains({x, y}, t)) ++hits;
                }
        CHECK(hits == 1);
    }
}

TEST_CASE("midpoint sits inside its column; bottom holds the active cube") {
    LatticeConfig lat{1, 2};
    for (int i = -3; i <= 3; ++i) {
        Site m = midpoint({i}, 1, lat);
        Region col = block_region({{i}, 0, 1, BlockKind::HatBlock}, lat);
        CHECK(col.contains_site(m));
        Region bot = block_region({{i}, 0, 1, BlockKind::Bottom}, lat);
        const int radius = static_cast<int>(lat.side(1) / 8);
        CHECK(bot.contains_site({m[0] - radius}));
        CHECK(bot.contains_site({m[0] + radius}));
    }
}
