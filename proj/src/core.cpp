#include "tilesim/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tilesim {

std::vector<std::pair<Pos, Site>> Configuration::sorted_cells() const {
    std::vector<std::pair<Pos, Site>> out(cells_.begin(), cells_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

TileSystem::TileSystem(std::vector<Glue> glues, std::vector<Tile> tiles, int temperature,
                       Configuration seed)
    : glues_(std::move(glues)),
      tiles_(std::move(tiles)),
      temperature_(temperature),
      seed_(std::move(seed)) {
    finalize();
}

void TileSystem::finalize() {
    if (temperature_ < 1) throw Error("temperature must be >= 1");

    if (std::none_of(glues_.begin(), glues_.end(),
                     [](const Glue& g) { return g.label == "null"; })) {
        glues_.push_back({"null", 0});
    }

    for (std::size_t i = 0; i < glues_.size(); ++i) {
        const Glue& g = glues_[i];
        if (g.strength < 0) throw Error("glue '" + g.label + "' has negative strength");
        if (g.label == "null" && g.strength != 0) throw Error("glue 'null' must have strength 0");
        if (!glue_by_label_.try_emplace(g.label, static_cast<int>(i)).second)
            throw Error("duplicate glue label '" + g.label + "'");
    }
    null_glue_ = glue_by_label_.at("null");

    strength_.resize(glues_.size());
    for (std::size_t i = 0; i < glues_.size(); ++i) strength_[i] = glues_[i].strength;

    edge_glue_.resize(tiles_.size());
    for (std::size_t i = 0; i < tiles_.size(); ++i) {
        const Tile& t = tiles_[i];
        if (!tile_by_name_.try_emplace(t.name, static_cast<int>(i)).second)
            throw Error("duplicate tile name '" + t.name + "'");
        for (Dir d : kAllDirs) {
            auto it = glue_by_label_.find(t.edge(d));
            if (it == glue_by_label_.end())
                throw Error("unknown glue '" + t.edge(d) + "' on tile '" + t.name + "'");
            edge_glue_[i][static_cast<int>(d)] = it->second;
        }
    }

    for (const auto& [pos, site] : seed_.cells()) {
        if (site.tile < 0 || site.tile >= static_cast<int>(tiles_.size()))
            throw Error("seed references an unknown tile");
        if (!site.seed) throw Error("seed configuration has a non-seed position");
    }
}

int TileSystem::tile_index(const std::string& name) const {
    auto it = tile_by_name_.find(name);
    return it == tile_by_name_.end() ? -1 : it->second;
}

int TileSystem::glue_index(const std::string& label) const {
    auto it = glue_by_label_.find(label);
    return it == glue_by_label_.end() ? -1 : it->second;
}

int TileSystem::tile_index_checked(const std::string& name) const {
    int idx = tile_index(name);
    if (idx < 0) throw Error("unknown tile '" + name + "'");
    return idx;
}

double ConcentrationVector::sum() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

bool ConcentrationVector::normalized(double tol) const {
    return std::abs(sum() - 1.0) <= tol;
}

void ConcentrationVector::require_positive() const {
    for (double v : values)
        if (!(v > 0.0)) throw Error("concentration entries must be strictly positive");
}

ConcentrationVector ConcentrationVector::scaled(double factor) const {
    ConcentrationVector out(values);
    for (double& v : out.values) v *= factor;
    return out;
}

ConcentrationVector ConcentrationVector::normalized_copy() const {
    double total = sum();
    if (!(total > 0.0)) throw Error("cannot normalize a non-positive concentration vector");
    return scaled(1.0 / total);
}

int bond_contribution(const Configuration& config, const TileSystem& system, int tile, Pos pos,
                      Dir d) {
    const Site* s = config.at(neighbor(pos, d));
    return s ? system.face_bond(tile, d, s->tile) : 0;
}

int bond_strength(const Configuration& config, const TileSystem& system, int tile, Pos pos) {
    if (config.occupied(pos)) throw Error("bond_strength: position already occupied");
    int total = 0;
    for (Dir d : kAllDirs) total += bond_contribution(config, system, tile, pos, d);
    return total;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok.starts_with('#')) break;
        tokens.push_back(tok);
    }
    return tokens;
}

int parse_int(const std::string& tok, int line_no, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line_no, std::string("expected an integer ") + what + ", got '" + tok + "'");
    return value;
}

}  // namespace

TileSystem parse_tile_system(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    std::optional<int> temperature;
    std::vector<Glue> glues;
    std::vector<Tile> tiles;
    struct SeedLine {
        Pos pos;
        std::string tile;
        int line_no;
    };
    std::vector<SeedLine> seed_lines;
    bool saw_tile = false;
    bool saw_seed = false;

    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        const std::string& kw = tokens[0];

        if (kw == "temperature") {
            if (tokens.size() != 2) throw ParseError(line_no, "temperature takes one value");
            if (temperature) throw ParseError(line_no, "temperature declared twice");
            if (saw_tile || saw_seed || !glues.empty())
                throw ParseError(line_no, "temperature must come first");
            int tau = parse_int(tokens[1], line_no, "temperature");
            if (tau < 1) throw ParseError(line_no, "temperature must be >= 1");
            temperature = tau;
        } else if (kw == "glue") {
            if (tokens.size() != 3) throw ParseError(line_no, "glue takes a label and a strength");
            if (!temperature) throw ParseError(line_no, "temperature must come first");
            if (saw_tile || saw_seed) throw ParseError(line_no, "glues must precede tiles and seed");
            if (tokens[1] == "null") throw ParseError(line_no, "glue 'null' may not be redeclared");
            int strength = parse_int(tokens[2], line_no, "glue strength");
            if (strength < 0) throw ParseError(line_no, "glue strength must be non-negative");
            glues.push_back({tokens[1], strength});
        } else if (kw == "tile") {
            if (tokens.size() != 6)
                throw ParseError(line_no, "tile takes a name and four glue labels (N E S W)");
            if (!temperature) throw ParseError(line_no, "temperature must come first");
            if (saw_seed) throw ParseError(line_no, "tiles must precede seed lines");
            saw_tile = true;
            tiles.push_back({tokens[1], {tokens[2], tokens[3], tokens[4], tokens[5]}});
        } else if (kw == "seed") {
            if (tokens.size() != 4) throw ParseError(line_no, "seed takes x, y and a tile name");
            if (!temperature) throw ParseError(line_no, "temperature must come first");
            saw_seed = true;
            Pos p{parse_int(tokens[1], line_no, "x"), parse_int(tokens[2], line_no, "y")};
            seed_lines.push_back({p, tokens[3], line_no});
        } else {
            throw ParseError(line_no, "unknown directive '" + kw + "'");
        }
    }

    if (!temperature) throw ParseError(line_no, "missing temperature");

    // build through a scratch system to resolve names, then attach the seed
    TileSystem scratch(glues, tiles, *temperature, Configuration{});
    Configuration seed;
    for (const auto& s : seed_lines) {
        int idx = scratch.tile_index(s.tile);
        if (idx < 0) throw ParseError(s.line_no, "unknown tile '" + s.tile + "' in seed");
        if (seed.occupied(s.pos))
            throw ParseError(s.line_no, "seed position (" + std::to_string(s.pos.x) + "," +
                                            std::to_string(s.pos.y) + ") declared twice");
        seed.place(s.pos, idx, /*seed=*/true);
    }
    return TileSystem(std::move(glues), std::move(tiles), *temperature, std::move(seed));
}

std::string serialize_tile_system(const TileSystem& system) {
    std::ostringstream out;
    out << "temperature " << system.temperature() << "\n";

    std::vector<Glue> glues;
    for (const Glue& g : system.glues())
        if (g.label != "null") glues.push_back(g);
    std::sort(glues.begin(), glues.end(),
              [](const Glue& a, const Glue& b) { return a.label < b.label; });
    for (const Glue& g : glues) out << "glue " << g.label << " " << g.strength << "\n";

    std::vector<Tile> tiles = system.tiles();
    std::sort(tiles.begin(), tiles.end(),
              [](const Tile& a, const Tile& b) { return a.name < b.name; });
    for (const Tile& t : tiles) {
        out << "tile " << t.name;
        for (Dir d : kAllDirs) out << " " << t.edge(d);
        out << "\n";
    }

    for (const auto& [pos, site] : system.seed().sorted_cells())
        out << "seed " << pos.x << " " << pos.y << " " << system.tiles()[site.tile].name << "\n";
    return out.str();
}

TileSystem load_tile_system_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tile_system(buf.str());
}

}  // namespace tilesim
