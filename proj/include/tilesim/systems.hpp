#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tilesim/core.hpp"

namespace tilesim {

enum class SystemKind { A, B, Chain, Fanout };

// Parameterized description of a buildable system. A and B systems use two
// growth tiles X and Y at tau=2 with south+east inputs and identical outputs;
// the Y positions are selected per row by the east seed column. The B seed
// additionally separates an all-X left portion from the right portion.
struct SystemSpec {
    SystemKind kind = SystemKind::Chain;

    // kind A: growth region is width x height, east seed column at x=width.
    // kind B: right portion spans x in [1, width-1]; left portion is
    // left_width wide, west of the middle seed column at x=0.
    int width = 0;
    int height = 0;
    std::vector<int> y_rows;  // 1-based rows whose east seed face selects Y
    int left_width = 0;       // kind B

    int chain_length = 0;

    int fanout_n = 0;
    int fanout_k = 1;

    // when set, the builder verifies N_X : N_Y against the grown assembly
    std::optional<std::pair<long long, long long>> expected_ratio;
};

struct BuildResult {
    TileSystem system;
    std::map<std::string, long long> expected_counts;  // verified against tile_counts
    std::size_t footprint_size = 0;                    // non-seed positions
};

BuildResult build(const SystemSpec& spec);

// Desk-scale defaults for the named systems; A1/B1 carry ratio 25:1 and
// A2/B2 carry 64:1.
SystemSpec builtin_spec(const std::string& name);

bool is_builtin_name(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace tilesim
