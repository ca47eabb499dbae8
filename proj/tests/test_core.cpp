#include <doctest.h>

#include <string>

#include "tilesim/core.hpp"
#include "tilesim/rng.hpp"
#include "tilesim/systems.hpp"

using namespace tilesim;

namespace {

TileSystem tiny_system() {
    return parse_tile_system(
        "temperature 2\n"
        "glue a 1\n"
        "glue b 1\n"
        "glue s 2\n"
        "tile X a a a a\n"
        "tile Y a b a a\n"
        "tile S s s s s\n"
        "seed 0 0 S\n");
}

}  // namespace

TEST_SUITE_BEGIN("core");

TEST_CASE("parse echoes a minimal file") {
    TileSystem sys = parse_tile_system(
        "temperature 2\n"
        "glue a 1\n"
        "tile X a a a a\n"
        "seed 0 0 X\n");
    CHECK(sys.temperature() == 2);
    CHECK(sys.tiles().size() == 1);
    CHECK(sys.seed().size() == 1);
    CHECK(sys.seed().at({0, 0}) != nullptr);
}

TEST_CASE("unknown glue is rejected") {
    CHECK_THROWS_WITH_AS(parse_tile_system("temperature 2\n"
                                           "glue a 1\n"
                                           "tile X a z a a\n"),
                         doctest::Contains("unknown glue"), Error);
}

TEST_CASE("parse error carries a line number") {
    try {
        parse_tile_system("temperature 2\nglue a 1\nglue a 2\n");
        FAIL("expected a parse failure");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("duplicate glue") != std::string::npos);
    }

    try {
        parse_tile_system("temperature 2\nglue a one\n");
        FAIL("expected a parse failure");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("validation failures") {
    CHECK_THROWS_AS(parse_tile_system("temperature 0\n"), ParseError);
    CHECK_THROWS_WITH_AS(parse_tile_system("temperature 2\nglue null 1\n"),
                         doctest::Contains("null"), ParseError);
    CHECK_THROWS_WITH_AS(parse_tile_system("temperature 2\n"
                                           "tile X null null null null\n"
                                           "tile X null null null null\n"),
                         doctest::Contains("duplicate tile"), Error);
    CHECK_THROWS_WITH_AS(parse_tile_system("temperature 2\n"
                                           "tile X null null null null\n"
                                           "seed 0 0 X\n"
                                           "seed 0 0 X\n"),
                         doctest::Contains("declared twice"), ParseError);
    CHECK_THROWS_WITH_AS(parse_tile_system("temperature 2\nseed 0 0 Q\n"),
                         doctest::Contains("unknown tile"), ParseError);
}

TEST_CASE("bond_strength sums matched faces") {
    TileSystem sys = tiny_system();
    int x = sys.tile_index("X");
    int y = sys.tile_index("Y");

    Configuration config;
    config.place({0, 0}, x);
    // X presents "a" on its north face; X matches with its south "a"
    CHECK(bond_strength(config, sys, x, {0, 1}) == 1);
    CHECK(bond_strength(config, sys, y, {0, 1}) == 1);

    config.place({1, 1}, x);
    // south (a) + east (X west face "a" vs attaching east glue)
    CHECK(bond_strength(config, sys, x, {0, 1}) == 2);
    // Y's east glue is "b": east face contributes nothing
    CHECK(bond_strength(config, sys, y, {0, 1}) == 1);

    CHECK_THROWS_AS(bond_strength(config, sys, x, {0, 0}), Error);
}

TEST_CASE("null glue never bonds") {
    TileSystem sys = parse_tile_system(
        "temperature 1\n"
        "glue a 1\n"
        "tile N null null null null\n"
        "tile A a a a a\n"
        "seed 0 0 A\n");
    Configuration config;
    config.place({0, 0}, sys.tile_index("A"));
    CHECK(bond_strength(config, sys, sys.tile_index("N"), {0, 1}) == 0);
}

TEST_CASE("bond_strength additivity and translation invariance on random neighborhoods") {
    TileSystem sys = tiny_system();
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Configuration config;
        Pos center{static_cast<int>(rng.below(21)) - 10, static_cast<int>(rng.below(21)) - 10};
        for (Dir d : kAllDirs)
            if (rng.uniform() < 0.6)
                config.place(neighbor(center, d), static_cast<int>(rng.below(3)));
        int tile = static_cast<int>(rng.below(3));

        int total = bond_strength(config, sys, tile, center);
        int by_parts = 0;
        for (Dir d : kAllDirs) by_parts += bond_contribution(config, sys, tile, center, d);
        CHECK(total == by_parts);

        Pos shift{static_cast<int>(rng.below(41)) - 20, static_cast<int>(rng.below(41)) - 20};
        Configuration moved;
        for (const auto& [pos, site] : config.cells())
            moved.place({pos.x + shift.x, pos.y + shift.y}, site.tile);
        CHECK(bond_strength(moved, sys, tile, {center.x + shift.x, center.y + shift.y}) == total);
    }
}

TEST_CASE("serialize then parse is identity, byte-stable") {
    TileSystem sys = tiny_system();
    std::string text = serialize_tile_system(sys);
    TileSystem again = parse_tile_system(text);
    CHECK(again == sys);
    CHECK(serialize_tile_system(again) == text);
}

TEST_CASE("shipped A1 file round-trips against the builder") {
    BuildResult a1 = build(builtin_spec("A1"));
    std::string text = serialize_tile_system(a1.system);
    TileSystem parsed = parse_tile_system(text);
    CHECK(parsed == a1.system);
    CHECK(serialize_tile_system(parsed) == text);
}

TEST_CASE("concentration vector helpers") {
    ConcentrationVector c({0.25, 0.75});
    CHECK(c.normalized());
    CHECK(c.sum() == doctest::Approx(1.0));
    CHECK_NOTHROW(c.require_positive());
    ConcentrationVector bad({0.0, 1.0});
    CHECK_THROWS_AS(bad.require_positive(), Error);
    CHECK(!ConcentrationVector({0.3, 0.3}).normalized());
}

TEST_SUITE_END();
