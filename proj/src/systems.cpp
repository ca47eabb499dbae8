#include "tilesim/systems.hpp"

#include <algorithm>

#include "tilesim/atam.hpp"

namespace tilesim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(what);
}

struct Builder {
    std::vector<Glue> glues;
    std::vector<Tile> tiles;
    Configuration seed;

    int tile_id(const std::string& name) const {
        for (std::size_t i = 0; i < tiles.size(); ++i)
            if (tiles[i].name == name) return static_cast<int>(i);
        throw Error("builder: unknown tile '" + name + "'");
    }

    void place_seed(Pos p, const std::string& name) { seed.place(p, tile_id(name), true); }
};

BuildResult finish(Builder&& b, int temperature, std::map<std::string, long long> expected,
                   const std::optional<std::pair<long long, long long>>& ratio,
                   const std::string& x_name = "X", const std::string& y_name = "Y") {
    BuildResult out{TileSystem(std::move(b.glues), std::move(b.tiles), temperature,
                               std::move(b.seed)),
                    std::move(expected), 0};
    for (const auto& [name, n] : out.expected_counts) out.footprint_size += n;

    // the constructed geometry must grow to exactly the expected counts
    Assembly assembly = terminal_assembly(out.system, 4 * out.footprint_size + 16);
    auto actual = tile_counts(assembly, out.system);
    for (const auto& [name, n] : actual) {
        long long want = out.expected_counts.count(name) ? out.expected_counts.at(name) : 0;
        require(n == want, "builder: tile '" + name + "' count " + std::to_string(n) +
                               " differs from expected " + std::to_string(want));
    }
    if (ratio) {
        long long nx = actual.count(x_name) ? actual.at(x_name) : 0;
        long long ny = actual.count(y_name) ? actual.at(y_name) : 0;
        require(ny > 0 && nx * ratio->second == ny * ratio->first,
                "builder: ratio mismatch, requested " + std::to_string(ratio->first) + ":" +
                    std::to_string(ratio->second) + " but built " + std::to_string(nx) + ":" +
                    std::to_string(ny));
    }
    return out;
}

Builder xy_tiles() {
    Builder b;
    b.glues = {{"0", 1}, {"x", 1}, {"y", 1}};
    // identical north/west outputs, shared south input, east input selects
    b.tiles = {
        {"X", {"0", "x", "0", "x"}},
        {"Y", {"0", "y", "0", "x"}},
        {"sA", {"0", "null", "null", "null"}},   // south arm, presents north "0"
        {"sX", {"null", "null", "null", "x"}},   // seed column face selecting X
        {"sY", {"null", "null", "null", "y"}},   // seed column face selecting Y
    };
    return b;
}

BuildResult build_a(const SystemSpec& spec) {
    require(spec.width >= 1 && spec.height >= 1, "kind A needs positive width and height");
    for (int r : spec.y_rows)
        require(r >= 1 && r <= spec.height, "y_rows entries must lie in [1, height]");

    Builder b = xy_tiles();
    for (int x = 0; x < spec.width; ++x) b.place_seed({x, 0}, "sA");
    for (int y = 1; y <= spec.height; ++y) {
        bool is_y = std::find(spec.y_rows.begin(), spec.y_rows.end(), y) != spec.y_rows.end();
        b.place_seed({spec.width, y}, is_y ? "sY" : "sX");
    }

    long long total = static_cast<long long>(spec.width) * spec.height;
    long long ny = static_cast<long long>(spec.y_rows.size());
    return finish(std::move(b), 2, {{"X", total - ny}, {"Y", ny}}, spec.expected_ratio);
}

BuildResult build_b(const SystemSpec& spec) {
    require(spec.width >= 2 && spec.height >= 1 && spec.left_width >= 1,
            "kind B needs width >= 2, height >= 1 and left_width >= 1");
    for (int r : spec.y_rows)
        require(r >= 1 && r <= spec.height, "y_rows entries must lie in [1, height]");

    Builder b = xy_tiles();
    b.tiles.push_back({"sM", {"null", "null", "null", "x"}});  // middle column
    for (int x = -spec.left_width; x < spec.width; ++x) b.place_seed({x, 0}, "sA");
    for (int y = 1; y <= spec.height; ++y) {
        b.place_seed({0, y}, "sM");
        bool is_y = std::find(spec.y_rows.begin(), spec.y_rows.end(), y) != spec.y_rows.end();
        b.place_seed({spec.width, y}, is_y ? "sY" : "sX");
    }

    long long total = static_cast<long long>(spec.left_width + spec.width - 1) * spec.height;
    long long ny = static_cast<long long>(spec.y_rows.size());
    return finish(std::move(b), 2, {{"X", total - ny}, {"Y", ny}}, spec.expected_ratio);
}

BuildResult build_chain(const SystemSpec& spec) {
    require(spec.chain_length >= 1, "chain needs length >= 1");
    Builder b;
    b.glues = {{"c", 2}};
    b.tiles = {
        {"C", {"null", "c", "null", "c"}},
        {"sL", {"null", "c", "null", "null"}},
        {"sR", {"null", "null", "null", "null"}},  // occupancy terminates the chain
    };
    b.place_seed({0, 0}, "sL");
    b.place_seed({spec.chain_length + 1, 0}, "sR");
    return finish(std::move(b), 2, {{"C", spec.chain_length}}, std::nullopt);
}

BuildResult build_fanout(const SystemSpec& spec) {
    require(spec.fanout_n >= 1 && spec.fanout_k >= 1 && spec.fanout_k <= spec.fanout_n,
            "fanout needs n >= k >= 1");
    Builder b;
    std::map<std::string, long long> expected;
    for (int j = 0; j < spec.fanout_k; ++j) {
        std::string fj = "f" + std::to_string(j);
        b.glues.push_back({fj, 2});
        b.tiles.push_back({"F" + std::to_string(j), {"null", "null", fj, "null"}});
        b.tiles.push_back({"sF" + std::to_string(j), {fj, "null", "null", "null"}});
    }
    for (int x = 0; x < spec.fanout_n; ++x) {
        int j = x % spec.fanout_k;
        b.place_seed({x, 0}, "sF" + std::to_string(j));
        ++expected["F" + std::to_string(j)];
    }
    return finish(std::move(b), 2, std::move(expected), std::nullopt);
}

}  // namespace

BuildResult build(const SystemSpec& spec) {
    switch (spec.kind) {
        case SystemKind::A: return build_a(spec);
        case SystemKind::B: return build_b(spec);
        case SystemKind::Chain: return build_chain(spec);
        case SystemKind::Fanout: return build_fanout(spec);
    }
    throw Error("unknown system kind");
}

SystemSpec builtin_spec(const std::string& name) {
    SystemSpec spec;
    if (name == "A1") {
        // 26 rows of 4, Y selected on four rows: N_X:N_Y = 100:4 = 25:1
        spec.kind = SystemKind::A;
        spec.width = 4;
        spec.height = 26;
        spec.y_rows = {7, 13, 20, 26};
        spec.expected_ratio = {{25, 1}};
    } else if (name == "A2") {
        // 13 rows of 5, one Y row: 64:1
        spec.kind = SystemKind::A;
        spec.width = 5;
        spec.height = 13;
        spec.y_rows = {7};
        spec.expected_ratio = {{64, 1}};
    } else if (name == "B1") {
        // left arm 12x2 all X, right column of 2 with one Y: 25:1
        spec.kind = SystemKind::B;
        spec.width = 2;
        spec.height = 2;
        spec.left_width = 12;
        spec.y_rows = {2};
        spec.expected_ratio = {{25, 1}};
    } else if (name == "B2") {
        // left arm 12x5 all X, right column of 5 with one Y: 64:1
        spec.kind = SystemKind::B;
        spec.width = 2;
        spec.height = 5;
        spec.left_width = 12;
        spec.y_rows = {3};
        spec.expected_ratio = {{64, 1}};
    } else if (name == "chain") {
        spec.kind = SystemKind::Chain;
        spec.chain_length = 10;
    } else if (name == "fanout") {
        spec.kind = SystemKind::Fanout;
        spec.fanout_n = 100;
        spec.fanout_k = 2;
    } else {
        throw Error("unknown builtin system '" + name + "'");
    }
    return spec;
}

bool is_builtin_name(const std::string& name) {
    auto names = builtin_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string> builtin_names() { return {"A1", "A2", "B1", "B2", "chain", "fanout"}; }

}  // namespace tilesim
