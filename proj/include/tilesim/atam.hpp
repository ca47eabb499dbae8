#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tilesim/core.hpp"

namespace tilesim {

class NondeterminismError : public Error {
  public:
    using Error::Error;
};

class GrowthBoundError : public Error {
  public:
    using Error::Error;
};

// Result of error-free growth to the unique terminal configuration.
struct Assembly {
    Configuration final;
    std::vector<long long> counts;  // per tile index, seed positions excluded
    int depth = 0;                  // longest path in the attachment-order DAG
    std::vector<Pos> footprint;     // every occupied position, sorted by (y,x)

    long long total_count() const {
        long long n = 0;
        for (long long c : counts) n += c;
        return n;
    }
};

struct RectViolation {
    std::string tile;
    Pos pos;
    std::vector<Dir> input_edges;
    std::string note;
};

struct RectilinearReport {
    bool is_rectilinear = false;
    std::vector<Dir> input_edges;  // the common direction set when rectilinear
    std::vector<RectViolation> violations;
};

// All (position, tile) pairs attachable to config with strength >= tau.
std::vector<std::pair<Pos, int>> frontier(const Configuration& config, const TileSystem& system);

// Grows the seed until no attachment is possible. Throws NondeterminismError
// when two distinct tile types become attachable at one position, and
// GrowthBoundError past max_positions. A seeded order shuffles frontier
// selection; the result must not depend on it for deterministic systems.
Assembly terminal_assembly(const TileSystem& system, std::size_t max_positions,
                           std::optional<std::uint64_t> order_seed = std::nullopt);

std::map<std::string, long long> tile_counts(const Assembly& assembly, const TileSystem& system);

// Replays growth recording each attachment's input edges (directions with
// positive bond contribution). Rectilinear iff growth is deterministic and
// every attachment of every tile shares one direction set.
RectilinearReport check_rectilinear(const TileSystem& system, std::size_t max_positions);

int assembly_depth(const TileSystem& system, std::size_t max_positions);

// Text grid for the terminal subcommand: one row per y (descending), "."
// for empty, seed tiles in brackets.
std::string render_grid(const Configuration& config, const TileSystem& system);

}  // namespace tilesim
