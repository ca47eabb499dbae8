#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tilesim/core.hpp"
#include "tilesim/ktam.hpp"
#include "tilesim/optimize.hpp"

namespace tilesim {

// sum of N_i / c_i over tiles; shared by the double API and the exact
// rational identity tests
template <class T>
T weighted_inverse_sum(const std::vector<T>& counts, const std::vector<T>& conc) {
    T total{};
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == T{}) continue;
        total = total + counts[i] / conc[i];
    }
    return total;
}

// (1/k_f) sum_i N_i / c_i: the sequential (one-by-one attachment) closed form.
double expected_time_sequential(const std::vector<double>& counts,
                                const ConcentrationVector& conc, double k_f);

// Same optimum as the error objective; exposed separately because the time
// theorem stands on its own.
ConcentrationVector min_time_concentrations(const std::vector<double>& counts);

// Expected time for all positions to fill in parallel, position of type t
// filling at rate k_f * c_t independently. positions_per_type gives the
// multiplicity of each distinct tile type.
double fanout_expected_time(const std::vector<long long>& positions_per_type,
                            const ConcentrationVector& conc, double k_f);

// Concentration floor 1/(k ln N) that any time-optimal fan-out assignment
// must respect.
double fanout_concentration_floor(long long n_positions, int tile_types);

// ceil(48 S^2 / eps) simulations for a mean within +-eps w.p. >= 3/4.
long long sample_count(double s_upper, double eps);

// Planning bound d / (k_f c_min) from the assembly depth.
double s_upper_bound(const TileSystem& system, double c_min, double k_f,
                     std::size_t max_positions);

struct TimeEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double ci_halfwidth = 0.0;  // 95%, from the sample variance
    long long runs = 0;
    double s_upper = 0.0;
    long long planned_runs = 0;
    bool ci_defined = false;
    bool variance_bound_exceeded = false;  // sample variance > 24 mean^2 + 3 SE
    long long runs_with_errors = 0;
    std::vector<double> run_times;  // ordered by run index
};

// Monte Carlo estimate of the expected assembly time (time to footprint
// coverage). Pass `runs` directly or an accuracy target `eps_target` to plan
// the count via sample_count(s_upper_bound(...), eps). Budget-terminated
// runs invalidate the estimate.
TimeEstimate estimate_time_mc(const TileSystem& system, const ConcentrationVector& conc,
                              const KineticParams& params, std::optional<long long> runs,
                              std::optional<double> eps_target, std::uint64_t master_seed,
                              int jobs = 1, bool ignore_errors = false, Budget budget = {},
                              std::size_t max_positions = 1u << 20);

}  // namespace tilesim
