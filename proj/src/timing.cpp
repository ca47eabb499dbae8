#include "tilesim/timing.hpp"

#include <algorithm>
#include <cmath>

#include "tilesim/atam.hpp"

namespace tilesim {

double expected_time_sequential(const std::vector<double>& counts,
                                const ConcentrationVector& conc, double k_f) {
    if (!(k_f > 0)) throw Error("k_f must be positive");
    if (conc.size() != counts.size()) throw Error("concentration vector size mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] > 0 && !(conc[i] > 0))
            throw Error("zero concentration for a tile with positive count");
    return weighted_inverse_sum(counts, conc.values) / k_f;
}

ConcentrationVector min_time_concentrations(const std::vector<double>& counts) {
    return sqrt_concentrations(counts);
}

double fanout_expected_time(const std::vector<long long>& positions_per_type,
                            const ConcentrationVector& conc, double k_f) {
    if (conc.size() != positions_per_type.size())
        throw Error("concentration vector size mismatch");
    if (!(k_f > 0)) throw Error("k_f must be positive");

    std::size_t k = positions_per_type.size();
    std::vector<double> rate(k);
    std::size_t states = 1;
    for (std::size_t t = 0; t < k; ++t) {
        if (positions_per_type[t] < 0) throw Error("negative position count");
        if (positions_per_type[t] > 0 && !(conc[t] > 0))
            throw Error("zero concentration for a required tile");
        rate[t] = k_f * conc[t];
        states *= static_cast<std::size_t>(positions_per_type[t]) + 1;
        if (states > (1u << 24)) throw Error("fan-out state space too large");
    }

    // E[remaining m] = 1/R(m) + sum_t (m_t r_t / R(m)) E[m - e_t]; reduced
    // states precede m in the mixed-radix linear order, so one ascending pass
    // fills the table.
    std::vector<double> expected(states, 0.0);
    std::vector<std::size_t> stride(k, 1);
    for (std::size_t t = 1; t < k; ++t)
        stride[t] = stride[t - 1] * (static_cast<std::size_t>(positions_per_type[t - 1]) + 1);

    std::vector<long long> m(k, 0);
    for (std::size_t index = 1; index < states; ++index) {
        // increment mixed-radix counter
        for (std::size_t t = 0; t < k; ++t) {
            if (m[t] < positions_per_type[t]) {
                ++m[t];
                break;
            }
            m[t] = 0;
        }
        double total_rate = 0.0;
        for (std::size_t t = 0; t < k; ++t) total_rate += static_cast<double>(m[t]) * rate[t];
        double value = 1.0;
        for (std::size_t t = 0; t < k; ++t)
            if (m[t] > 0)
                value += static_cast<double>(m[t]) * rate[t] * expected[index - stride[t]];
        expected[index] = value / total_rate;
    }
    return expected[states - 1];
}

double fanout_concentration_floor(long long n_positions, int tile_types) {
    if (n_positions < 2 || tile_types < 1) throw Error("need N >= 2 and k >= 1");
    return 1.0 / (static_cast<double>(tile_types) * std::log(static_cast<double>(n_positions)));
}

long long sample_count(double s_upper, double eps) {
    if (!(s_upper > 0) || !(eps > 0)) throw Error("sample_count needs positive S and eps");
    double planned = std::ceil(48.0 * s_upper * s_upper / eps);
    if (!(planned < 9.0e18)) throw Error("planned run count overflows");
    return std::max<long long>(1, static_cast<long long>(planned));
}

double s_upper_bound(const TileSystem& system, double c_min, double k_f,
                     std::size_t max_positions) {
    if (!(c_min > 0) || !(k_f > 0)) throw Error("c_min and k_f must be positive");
    int d = assembly_depth(system, max_positions);
    return static_cast<double>(d) / (k_f * c_min);
}

TimeEstimate estimate_time_mc(const TileSystem& system, const ConcentrationVector& conc,
                              const KineticParams& params, std::optional<long long> runs,
                              std::optional<double> eps_target, std::uint64_t master_seed,
                              int jobs, bool ignore_errors, Budget budget,
                              std::size_t max_positions) {
    TimeEstimate estimate;
    estimate.s_upper = s_upper_bound(system, params.c_min, params.k_f, max_positions);
    if (runs) {
        if (*runs < 1) throw Error("run count must be >= 1");
        estimate.planned_runs = *runs;
    } else {
        if (!eps_target) throw Error("need either a run count or an accuracy target");
        estimate.planned_runs = sample_count(estimate.s_upper, *eps_target);
    }
    estimate.runs = estimate.planned_runs;

    Assembly reference = terminal_assembly(system, max_positions);
    auto results = run_batch(system, conc, params, budget, master_seed,
                             static_cast<int>(estimate.runs), jobs, reference);

    std::string truncated;
    int truncated_count = 0;
    estimate.run_times.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].terminated_by != Termination::FootprintFilled) {
            ++truncated_count;
            if (truncated_count <= 20)
                truncated += (truncated.empty() ? "" : ",") + std::to_string(i);
            continue;
        }
        estimate.run_times.push_back(results[i].elapsed);
        if (!ignore_errors) {
            auto report = classify_errors(results[i].final, reference);
            if (report.growth_errors + report.facet_errors > 0) ++estimate.runs_with_errors;
        }
    }
    if (truncated_count > 0)
        throw Error("estimate invalid: " + std::to_string(truncated_count) +
                    " budget-terminated runs (indices " + truncated +
                    (truncated_count > 20 ? ",..." : "") + ")");

    double n = static_cast<double>(estimate.run_times.size());
    double mean = 0.0;
    for (double t : estimate.run_times) mean += t;
    mean /= n;
    estimate.mean = mean;

    if (estimate.run_times.size() >= 2) {
        double ss = 0.0;
        for (double t : estimate.run_times) ss += (t - mean) * (t - mean);
        estimate.variance = ss / (n - 1.0);
        estimate.ci_halfwidth = 1.959963984540054 * std::sqrt(estimate.variance / n);
        estimate.ci_defined = true;
        double bound = 24.0 * mean * mean;
        double variance_se = estimate.variance * std::sqrt(2.0 / (n - 1.0));
        estimate.variance_bound_exceeded = estimate.variance > bound + 3.0 * variance_se;
    }
    return estimate;
}

}  // namespace tilesim
