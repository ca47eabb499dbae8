#include <doctest.h>

#include "tilesim/atam.hpp"
#include "tilesim/systems.hpp"

using namespace tilesim;

TEST_SUITE_BEGIN("systems");

TEST_CASE("paper ratios for the named systems") {
    struct Row {
        const char* name;
        long long nx, ny;
    };
    for (Row row : {Row{"A1", 25, 1}, Row{"A2", 64, 1}, Row{"B1", 25, 1}, Row{"B2", 64, 1}}) {
        BuildResult sys = build(builtin_spec(row.name));
        INFO(row.name);
        long long nx = sys.expected_counts.at("X");
        long long ny = sys.expected_counts.at("Y");
        CHECK(nx * row.ny == ny * row.nx);
    }
}

TEST_CASE("requested ratio is validated against grown counts") {
    SystemSpec spec = builtin_spec("A1");
    spec.expected_ratio = {{10, 1}};  // wrong on purpose
    CHECK_THROWS_WITH_AS(build(spec), doctest::Contains("ratio mismatch"), Error);
}

TEST_CASE("X and Y share outputs and the south glue") {
    BuildResult a1 = build(builtin_spec("A1"));
    const TileSystem& sys = a1.system;
    const Tile& x = sys.tiles()[sys.tile_index_checked("X")];
    const Tile& y = sys.tiles()[sys.tile_index_checked("Y")];
    CHECK(x.edge(Dir::North) == y.edge(Dir::North));
    CHECK(x.edge(Dir::West) == y.edge(Dir::West));
    CHECK(x.edge(Dir::South) == "0");
    CHECK(y.edge(Dir::South) == "0");
    CHECK(x.edge(Dir::East) != y.edge(Dir::East));
}

TEST_CASE("a single swapped tile leaves the rest of the assembly unchanged") {
    for (const char* name : {"A1", "B1"}) {
        INFO(name);
        BuildResult sys = build(builtin_spec(name));
        Assembly reference = terminal_assembly(sys.system, 4 * sys.footprint_size);
        int xi = sys.system.tile_index_checked("X");
        int yi = sys.system.tile_index_checked("Y");

        // swap one grown X for Y, re-grow from there, and compare footprints
        Pos swapped{};
        Configuration damaged;
        bool done = false;
        for (const auto& [pos, site] : reference.final.cells()) {
            int tile = site.tile;
            if (!done && !site.seed && tile == xi) {
                tile = yi;
                swapped = pos;
                done = true;
            }
            damaged.place(pos, tile, site.seed);
        }
        REQUIRE(done);

        CHECK(frontier(damaged, sys.system).empty());  // still terminal
        for (const auto& [pos, site] : reference.final.cells()) {
            const Site* got = damaged.at(pos);
            REQUIRE(got != nullptr);
            if (pos == swapped)
                CHECK(got->tile == yi);
            else
                CHECK(got->tile == site.tile);
        }
    }
}

TEST_CASE("chain spec of length L") {
    SystemSpec spec = builtin_spec("chain");
    spec.chain_length = 7;
    BuildResult chain = build(spec);
    CHECK(chain.expected_counts.at("C") == 7);
    CHECK(chain.footprint_size == 7);
}

TEST_CASE("fanout round-robin counts") {
    SystemSpec spec = builtin_spec("fanout");
    spec.fanout_n = 10;
    spec.fanout_k = 3;
    BuildResult fan = build(spec);
    CHECK(fan.expected_counts.at("F0") == 4);
    CHECK(fan.expected_counts.at("F1") == 3);
    CHECK(fan.expected_counts.at("F2") == 3);
}

TEST_CASE("builders validate their specs") {
    SystemSpec bad;
    bad.kind = SystemKind::A;
    bad.width = 0;
    bad.height = 3;
    CHECK_THROWS_AS(build(bad), Error);

    bad = builtin_spec("A1");
    bad.y_rows = {99};
    CHECK_THROWS_AS(build(bad), Error);

    CHECK_THROWS_AS(builtin_spec("Z9"), Error);
}

TEST_CASE("every builtin grows deterministically") {
    for (const std::string& name : builtin_names()) {
        BuildResult sys = build(builtin_spec(name));
        CHECK_NOTHROW(terminal_assembly(sys.system, 4 * sys.footprint_size));
    }
}

TEST_SUITE_END();
