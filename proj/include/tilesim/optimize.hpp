#pragma once

#include <optional>
#include <vector>

#include "tilesim/core.hpp"
#include "tilesim/ktam.hpp"

namespace tilesim {

// The growth-error objective: sum over tiles of N_i * (sum_{j!=i} eps_ij c_j / c_i).
struct ErrorObjective {
    std::vector<double> counts;  // N_i, aligned with the eps matrix
    EpsilonMatrix eps;
    std::optional<std::pair<double, double>> bounds;  // [c_min, c_max] for the minimizer

    void validate() const;
};

double total_growth_error(const ErrorObjective& obj, const ConcentrationVector& conc);

// d/dc_i of the objective; interior points only.
std::vector<double> objective_gradient(const ErrorObjective& obj, const ConcentrationVector& conc);

// Closed-form optimum: c_i = sqrt(N_i) / sum_j sqrt(N_j). Tiles with N_i = 0
// receive exactly 0 (callers that need every tile present substitute c_min).
ConcentrationVector sqrt_concentrations(const std::vector<double>& counts);

std::vector<std::size_t> zero_count_tiles(const std::vector<double>& counts);

// Max absolute mean-centered gradient component. Centering eliminates the
// simplex multiplier. The cross term uses eps_ji (the derivative of the
// objective as written); the symmetric case, where the optimum has a closed
// form, makes it equal to the eps_ij variant.
double stationarity_residual(const ErrorObjective& obj, const ConcentrationVector& conc);

struct MinimizeResult {
    ConcentrationVector conc;
    double objective = 0.0;
    double residual = 0.0;
    long long iterations = 0;
    bool converged = false;
};

// Projected gradient descent on the simplex (intersected with the box bounds
// when present), backtracking line search halving from the last accepted
// step. Stops at stationarity_residual <= tol or the iteration cap; a
// non-converged result still carries the best iterate found.
MinimizeResult minimize_error_numeric(const ErrorObjective& obj, const ConcentrationVector& init,
                                      double tol, long long max_iterations = 200000);

// Euclidean projection onto {c : sum = target, c >= floor}, then alternated
// with box clipping when bounds are given (<= 100 rounds).
std::vector<double> project_feasible(std::vector<double> v,
                                     const std::optional<std::pair<double, double>>& bounds,
                                     double floor = 1e-15);

}  // namespace tilesim
