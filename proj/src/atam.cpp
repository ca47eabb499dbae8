#include "tilesim/atam.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tilesim/rng.hpp"

namespace tilesim {

namespace {

std::vector<int> attachable_tiles(const Configuration& config, const TileSystem& system, Pos p) {
    std::vector<int> out;
    for (int t = 0; t < static_cast<int>(system.tiles().size()); ++t)
        if (bond_strength(config, system, t, p) >= system.temperature()) out.push_back(t);
    return out;
}

std::string pos_str(Pos p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

struct AttachmentRecord {
    Pos pos;
    int tile;
    unsigned input_mask;  // bit per Dir
};

struct GrowthResult {
    enum class Outcome { Terminal, Nondeterministic, GrowthBound };
    Outcome outcome = Outcome::Terminal;
    Configuration config;
    std::vector<AttachmentRecord> attachments;
    int depth = 0;
    Pos conflict_pos{};
    std::vector<int> conflict_tiles;
};

GrowthResult grow(const TileSystem& system, std::size_t max_positions,
                  std::optional<std::uint64_t> order_seed) {
    GrowthResult result;
    Configuration& config = result.config;
    for (const auto& [pos, site] : system.seed().cells()) config.place(pos, site.tile, true);

    std::optional<Rng> rng;
    if (order_seed) rng.emplace(*order_seed);

    std::deque<Pos> ready;
    std::unordered_map<Pos, int, PosHash> depth_at;  // attached non-seed positions

    // Examines an empty site; reports nondeterminism, queues it when exactly
    // one tile fits. Sites are re-examined every time a neighbor fills, so a
    // second candidate appearing later is still caught while the site is empty.
    auto examine = [&](Pos p) -> bool {
        if (config.occupied(p)) return true;
        auto tiles = attachable_tiles(config, system, p);
        if (tiles.size() >= 2) {
            result.outcome = GrowthResult::Outcome::Nondeterministic;
            result.conflict_pos = p;
            result.conflict_tiles = std::move(tiles);
            return false;
        }
        if (tiles.size() == 1) ready.push_back(p);
        return true;
    };

    for (const auto& [pos, site] : system.seed().cells())
        for (Dir d : kAllDirs)
            if (!examine(neighbor(pos, d))) return result;

    while (!ready.empty()) {
        std::size_t pick = 0;
        if (rng) pick = static_cast<std::size_t>(rng->below(ready.size()));
        Pos p = ready[pick];
        ready[pick] = ready.back();
        ready.pop_back();
        if (config.occupied(p)) continue;

        auto tiles = attachable_tiles(config, system, p);
        if (tiles.empty()) continue;  // stale entry
        if (tiles.size() >= 2) {
            result.outcome = GrowthResult::Outcome::Nondeterministic;
            result.conflict_pos = p;
            result.conflict_tiles = std::move(tiles);
            return result;
        }
        int tile = tiles[0];

        unsigned mask = 0;
        int parent_depth = 0;
        for (Dir d : kAllDirs) {
            if (bond_contribution(config, system, tile, p, d) > 0) {
                mask |= 1u << static_cast<int>(d);
                auto it = depth_at.find(neighbor(p, d));
                if (it != depth_at.end()) parent_depth = std::max(parent_depth, it->second);
            }
        }
        config.place(p, tile);
        int depth = parent_depth + 1;
        depth_at.emplace(p, depth);
        result.depth = std::max(result.depth, depth);
        result.attachments.push_back({p, tile, mask});

        if (config.size() - config.seed_count() > max_positions) {
            result.outcome = GrowthResult::Outcome::GrowthBound;
            return result;
        }

        if (!examine(p)) return result;  // unreachable; keeps the contract obvious
        for (Dir d : kAllDirs)
            if (!examine(neighbor(p, d))) return result;
    }
    return result;
}

Assembly to_assembly(GrowthResult&& g, const TileSystem& system) {
    Assembly out;
    out.counts.assign(system.tiles().size(), 0);
    for (const auto& rec : g.attachments) ++out.counts[rec.tile];
    out.depth = g.depth;
    out.footprint.reserve(g.config.size());
    for (const auto& [pos, site] : g.config.cells()) out.footprint.push_back(pos);
    std::sort(out.footprint.begin(), out.footprint.end());
    out.final = std::move(g.config);
    return out;
}

[[noreturn]] void throw_growth_failure(const GrowthResult& g, const TileSystem& system) {
    if (g.outcome == GrowthResult::Outcome::GrowthBound) throw GrowthBoundError("growth bound exceeded");
    std::ostringstream msg;
    msg << "nondeterministic at " << pos_str(g.conflict_pos) << ": {";
    for (std::size_t i = 0; i < g.conflict_tiles.size(); ++i)
        msg << (i ? "," : "") << system.tiles()[g.conflict_tiles[i]].name;
    msg << "}";
    throw NondeterminismError(msg.str());
}

}  // namespace

std::vector<std::pair<Pos, int>> frontier(const Configuration& config, const TileSystem& system) {
    std::unordered_set<Pos, PosHash> candidates;
    for (const auto& [pos, site] : config.cells())
        for (Dir d : kAllDirs) {
            Pos q = neighbor(pos, d);
            if (!config.occupied(q)) candidates.insert(q);
        }

    std::vector<std::pair<Pos, int>> out;
    for (Pos p : candidates)
        for (int t : attachable_tiles(config, system, p)) out.emplace_back(p, t);
    std::sort(out.begin(), out.end());
    return out;
}

Assembly terminal_assembly(const TileSystem& system, std::size_t max_positions,
                           std::optional<std::uint64_t> order_seed) {
    GrowthResult g = grow(system, max_positions, order_seed);
    if (g.outcome != GrowthResult::Outcome::Terminal) throw_growth_failure(g, system);
    return to_assembly(std::move(g), system);
}

std::map<std::string, long long> tile_counts(const Assembly& assembly, const TileSystem& system) {
    std::map<std::string, long long> out;
    for (std::size_t i = 0; i < assembly.counts.size(); ++i)
        out[system.tiles()[i].name] = assembly.counts[i];
    return out;
}

RectilinearReport check_rectilinear(const TileSystem& system, std::size_t max_positions) {
    RectilinearReport report;
    GrowthResult g = grow(system, max_positions, std::nullopt);

    auto dirs_of = [](unsigned mask) {
        std::vector<Dir> dirs;
        for (Dir d : kAllDirs)
            if (mask & (1u << static_cast<int>(d))) dirs.push_back(d);
        return dirs;
    };

    if (g.outcome == GrowthResult::Outcome::GrowthBound) {
        report.violations.push_back({"", {}, {}, "growth bound exceeded"});
        return report;
    }
    if (g.outcome == GrowthResult::Outcome::Nondeterministic) {
        std::string tiles;
        for (int t : g.conflict_tiles) tiles += (tiles.empty() ? "" : ",") + system.tiles()[t].name;
        report.violations.push_back(
            {tiles, g.conflict_pos, {}, "nondeterministic attachment (no unique terminal assembly)"});
        return report;
    }

    std::optional<unsigned> common;
    for (const auto& rec : g.attachments) {
        if (!common) common = rec.input_mask;
        if (rec.input_mask != *common)
            report.violations.push_back({system.tiles()[rec.tile].name, rec.pos,
                                         dirs_of(rec.input_mask), "input edges differ"});
    }
    if (report.violations.empty()) {
        report.is_rectilinear = true;
        if (common) report.input_edges = dirs_of(*common);
    } else if (common) {
        report.input_edges = dirs_of(*common);
    }
    return report;
}

int assembly_depth(const TileSystem& system, std::size_t max_positions) {
    return terminal_assembly(system, max_positions).depth;
}

std::string render_grid(const Configuration& config, const TileSystem& system) {
    if (config.size() == 0) return "";
    int xmin = INT32_MAX, xmax = INT32_MIN, ymin = INT32_MAX, ymax = INT32_MIN;
    for (const auto& [pos, site] : config.cells()) {
        xmin = std::min(xmin, pos.x);
        xmax = std::max(xmax, pos.x);
        ymin = std::min(ymin, pos.y);
        ymax = std::max(ymax, pos.y);
    }
    std::ostringstream out;
    for (int y = ymax; y >= ymin; --y) {
        for (int x = xmin; x <= xmax; ++x) {
            if (x > xmin) out << " ";
            const Site* s = config.at({x, y});
            if (!s)
                out << ".";
            else if (s->seed)
                out << "[" << system.tiles()[s->tile].name << "]";
            else
                out << system.tiles()[s->tile].name;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace tilesim
