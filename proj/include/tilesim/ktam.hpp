#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tilesim/atam.hpp"
#include "tilesim/core.hpp"

namespace tilesim {

struct KineticParams {
    double k_f = 1.0;
    double k_r = 1.0;
    double g_se = 8.0;
    double lock_rate = 0.0;  // r in the error model
    double c_min = 0.0;
    double c_max = 0.0;

    void validate() const;

    // Rate-regime checks from the kinetic model; violations are reported,
    // not fatal. Empty result means both inequalities hold with margin 10x.
    std::vector<std::string> regime_warnings(int tau) const;
};

// Fills c_min/c_max from the positive entries of conc and defaults the
// lock-in rate to its upper bound 2*k_f*c_max.
KineticParams make_params(double k_f, double k_r, double g_se, const ConcentrationVector& conc,
                          std::optional<double> lock_rate = std::nullopt);

double forward_rate(int tile, const ConcentrationVector& conc, const KineticParams& params);
double reverse_rate(int matched_strength, const KineticParams& params);

// epsilon_ij = r / (r + k_r e^{-(tau-m) G_se}): probability that a tile
// bound with strength tau-m locks in before detaching.
double epsilon(int mismatch_strength, int tau, const KineticParams& params);

using EpsilonMatrix = std::vector<std::vector<double>>;

// m_ij = summed strength of the correct tile's input glues that tile j
// mismatches; requires a rectilinear system (fixed input edges).
EpsilonMatrix epsilon_matrix(const TileSystem& system, const RectilinearReport& rect,
                             const KineticParams& params);

// Tile pairs indistinguishable on the input edges (m = 0 off-diagonal);
// such duplicates make the error model degenerate.
std::vector<std::pair<int, int>> duplicate_input_pairs(const TileSystem& system,
                                                       const RectilinearReport& rect);

// Sum over j != i of eps[i][j] * c_j / c_i.
double site_error_probability(int correct_tile, const ConcentrationVector& conc,
                              const EpsilonMatrix& eps);

// Closed-form absorption probability of the four-state site chain
// (empty -> T_i locked | empty -> T_j -> {empty, locked}):
//   P = c_j q / (c_i + c_j q),  q = r / (r + k_r e^{-(tau-m) G_se}).
double markov_site_oracle(int correct_tile, int wrong_tile, const ConcentrationVector& conc,
                          const KineticParams& params, int tau, int mismatch_strength);

enum class Termination { FootprintFilled, EventBudget, TimeCap, Stuck };

const char* termination_name(Termination t);

struct Budget {
    std::optional<std::uint64_t> max_events;  // default: 50 * footprint size
    double time_cap = std::numeric_limits<double>::infinity();
};

struct SimEvent {
    double time;
    bool attach;  // false = detach
    Pos pos;
    int tile;
    int bond;  // matched strength at the moment of the event
};

struct SimResult {
    Configuration final;
    double elapsed = 0.0;
    std::uint64_t attach_events = 0;
    std::uint64_t detach_events = 0;
    std::vector<std::uint64_t> attach_counts;  // per tile index
    Termination terminated_by = Termination::Stuck;
    std::uint64_t rng_seed = 0;
    std::vector<SimEvent> events;  // populated when SimOptions::record_events
};

struct SimOptions {
    bool allow_zero_bond = false;  // admit b=0 attachments at frontier sites
    bool record_events = false;
};

// Exact SSA over single-tile attachments and detachments: attach rate
// k_f c_t per (site, tile) with matched strength >= 1 (or >= 0 with
// allow_zero_bond) at empty sites with an occupied 4-neighbor, detach rate
// k_r e^{-b G_se} per occupied non-seed site. Tiles with zero concentration
// never attach. Runs until the reference footprint is covered or a budget
// is hit. Identical inputs give an identical event sequence.
SimResult simulate(const TileSystem& system, const ConcentrationVector& conc,
                   const KineticParams& params, std::uint64_t rng_seed, const Budget& budget,
                   const Assembly& reference, const SimOptions& options = {});

// Convenience overload; grows the reference terminal assembly first.
SimResult simulate(const TileSystem& system, const ConcentrationVector& conc,
                   const KineticParams& params, std::uint64_t rng_seed, const Budget& budget,
                   const SimOptions& options = {});

struct ErrorRecord {
    Pos pos;
    int expected_tile;  // -1 when no tile belongs at pos (facet error)
    int observed_tile;
};

struct ErrorReport {
    long long growth_errors = 0;
    long long facet_errors = 0;
    std::vector<ErrorRecord> per_position;
    std::vector<Pos> incomplete;  // footprint positions left unfilled
};

ErrorReport classify_errors(const Configuration& final, const Assembly& reference);

// Runs `runs` independent simulations with per-run streams derived from
// master_seed; results are ordered by run index regardless of scheduling.
std::vector<SimResult> run_batch(const TileSystem& system, const ConcentrationVector& conc,
                                 const KineticParams& params, const Budget& budget,
                                 std::uint64_t master_seed, int runs, int jobs,
                                 const Assembly& reference, const SimOptions& options = {});

}  // namespace tilesim
