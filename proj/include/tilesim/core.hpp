#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tilesim {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
  public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

enum class Dir : int { North = 0, East = 1, South = 2, West = 3 };

constexpr std::array<Dir, 4> kAllDirs = {Dir::North, Dir::East, Dir::South, Dir::West};

inline Dir opposite(Dir d) {
    switch (d) {
        case Dir::North: return Dir::South;
        case Dir::East: return Dir::West;
        case Dir::South: return Dir::North;
        case Dir::West: return Dir::East;
    }
    return Dir::North;
}

inline const char* dir_name(Dir d) {
    switch (d) {
        case Dir::North: return "north";
        case Dir::East: return "east";
        case Dir::South: return "south";
        case Dir::West: return "west";
    }
    return "?";
}

struct Pos {
    int x = 0;
    int y = 0;

    friend bool operator==(const Pos&, const Pos&) = default;
    // row-major, y descending, matches seed-line sort order
    friend auto operator<=>(const Pos& a, const Pos& b) {
        if (a.y != b.y) return a.y <=> b.y;
        return a.x <=> b.x;
    }
};

// x grows east, y grows north
inline Pos neighbor(Pos p, Dir d) {
    switch (d) {
        case Dir::North: return {p.x, p.y + 1};
        case Dir::East: return {p.x + 1, p.y};
        case Dir::South: return {p.x, p.y - 1};
        case Dir::West: return {p.x - 1, p.y};
    }
    return p;
}

struct PosHash {
    std::size_t operator()(const Pos& p) const {
        std::uint64_t k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                          static_cast<std::uint32_t>(p.y);
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

// A glue bonds only to an identical label, with the label's strength.
// "null" is reserved with strength 0.
struct Glue {
    std::string label;
    int strength = 0;

    friend bool operator==(const Glue&, const Glue&) = default;
};

struct Tile {
    std::string name;
    std::array<std::string, 4> edges;  // by Dir: north, east, south, west

    const std::string& edge(Dir d) const { return edges[static_cast<int>(d)]; }

    friend bool operator==(const Tile&, const Tile&) = default;
};

struct Site {
    int tile = -1;  // index into TileSystem::tiles
    bool seed = false;

    friend bool operator==(const Site&, const Site&) = default;
};

// Finite map from lattice positions to tiles; absence = empty.
class Configuration {
  public:
    using Map = std::unordered_map<Pos, Site, PosHash>;

    bool occupied(Pos p) const { return cells_.contains(p); }
    const Site* at(Pos p) const {
        auto it = cells_.find(p);
        return it == cells_.end() ? nullptr : &it->second;
    }

    void place(Pos p, int tile, bool seed = false) {
        auto [it, inserted] = cells_.try_emplace(p, Site{tile, seed});
        if (!inserted) throw Error("position already occupied");
        if (seed) ++seed_count_;
    }

    void remove(Pos p) {
        auto it = cells_.find(p);
        if (it == cells_.end()) throw Error("removing an empty position");
        if (it->second.seed) throw Error("seed positions are immutable");
        cells_.erase(it);
    }

    std::size_t size() const { return cells_.size(); }
    std::size_t seed_count() const { return seed_count_; }
    const Map& cells() const { return cells_; }

    // deterministic iteration order: by (y, x)
    std::vector<std::pair<Pos, Site>> sorted_cells() const;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.cells_ == b.cells_;
    }

  private:
    Map cells_;
    std::size_t seed_count_ = 0;
};

// The <tiles, seed, glue strengths, temperature> quadruple. Immutable once
// built; finalize() validates invariants and compiles lookup tables.
class TileSystem {
  public:
    TileSystem() = default;
    TileSystem(std::vector<Glue> glues, std::vector<Tile> tiles, int temperature,
               Configuration seed);

    const std::vector<Glue>& glues() const { return glues_; }
    const std::vector<Tile>& tiles() const { return tiles_; }
    int temperature() const { return temperature_; }
    const Configuration& seed() const { return seed_; }

    int tile_index(const std::string& name) const;         // -1 if unknown
    int glue_index(const std::string& label) const;        // -1 if unknown
    int tile_index_checked(const std::string& name) const; // throws

    // compiled tables
    int edge_glue(int tile, Dir d) const { return edge_glue_[tile][static_cast<int>(d)]; }
    int glue_strength(int glue) const { return strength_[glue]; }

    // Strength contribution on one face: tiles bond when the facing labels
    // are identical ("null" never bonds).
    int face_bond(int tile, Dir d, int neighbor_tile) const {
        int g = edge_glue(tile, d);
        return g == edge_glue(neighbor_tile, opposite(d)) ? strength_[g] : 0;
    }

    bool null_glue(int glue) const { return glue == null_glue_; }

    friend bool operator==(const TileSystem& a, const TileSystem& b) {
        return a.glues_ == b.glues_ && a.tiles_ == b.tiles_ &&
               a.temperature_ == b.temperature_ && a.seed_ == b.seed_;
    }

  private:
    void finalize();

    std::vector<Glue> glues_;  // includes "null" at index null_glue_
    std::vector<Tile> tiles_;
    int temperature_ = 1;
    Configuration seed_;

    std::unordered_map<std::string, int> tile_by_name_;
    std::unordered_map<std::string, int> glue_by_label_;
    std::vector<std::array<int, 4>> edge_glue_;
    std::vector<int> strength_;
    int null_glue_ = -1;
};

// Per-tile relative concentrations, aligned with TileSystem::tiles order.
struct ConcentrationVector {
    std::vector<double> values;

    ConcentrationVector() = default;
    explicit ConcentrationVector(std::vector<double> v) : values(std::move(v)) {}

    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
    double sum() const;
    bool normalized(double tol = 1e-12) const;
    void require_positive() const;  // throws on any entry <= 0

    ConcentrationVector scaled(double factor) const;
    ConcentrationVector normalized_copy() const;
};

// Total matched-glue strength f_{C,t}(x,y) a tile would have at an empty
// position: sum over the four directions of the facing-label match strengths.
int bond_strength(const Configuration& config, const TileSystem& system, int tile, Pos pos);

// Per-direction contribution (0 for empty neighbors or mismatched labels).
int bond_contribution(const Configuration& config, const TileSystem& system, int tile, Pos pos,
                      Dir d);

TileSystem parse_tile_system(const std::string& text);
std::string serialize_tile_system(const TileSystem& system);

TileSystem load_tile_system_file(const std::string& path);

}  // namespace tilesim
