#include "tilesim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tilesim {

void ErrorObjective::validate() const {
    if (counts.empty()) throw Error("objective needs at least one tile");
    if (eps.size() != counts.size()) throw Error("eps matrix size does not match counts");
    bool any_positive = false;
    for (double n : counts) {
        if (n < 0) throw Error("tile counts must be non-negative");
        if (n > 0) any_positive = true;
    }
    if (!any_positive) throw Error("objective needs at least one positive count");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i].size() != counts.size()) throw Error("eps matrix must be square");
        if (eps[i][i] != 0.0) throw Error("eps matrix must have a zero diagonal");
        for (double e : eps[i])
            if (e < 0.0 || e >= 1.0) throw Error("eps entries must lie in [0, 1)");
    }
    if (bounds && !(bounds->first > 0 && bounds->first <= bounds->second))
        throw Error("bounds must satisfy 0 < c_min <= c_max");
}

double total_growth_error(const ErrorObjective& obj, const ConcentrationVector& conc) {
    obj.validate();
    std::size_t n = obj.counts.size();
    if (conc.size() != n) throw Error("concentration vector size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double cross = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cross += obj.eps[i][j] * conc[j];
        double numer = obj.counts[i] * cross;
        if (numer == 0.0) continue;
        if (!(conc[i] > 0.0))
            throw Error("objective undefined: zero concentration with a positive error term");
        total += numer / conc[i];
    }
    return total;
}

std::vector<double> objective_gradient(const ErrorObjective& obj, const ConcentrationVector& conc) {
    std::size_t n = obj.counts.size();
    std::vector<double> grad(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(conc[i] > 0.0)) throw Error("gradient needs strictly positive concentrations");
        double cross = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cross += obj.eps[i][j] * conc[j];
        grad[i] = -obj.counts[i] * cross / (conc[i] * conc[i]);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) grad[i] += obj.counts[j] * obj.eps[j][i] / conc[j];
    }
    return grad;
}

ConcentrationVector sqrt_concentrations(const std::vector<double>& counts) {
    double denom = 0.0;
    for (double n : counts) {
        if (n < 0) throw Error("tile counts must be non-negative");
        denom += std::sqrt(n);
    }
    if (!(denom > 0)) throw Error("all tile counts are zero");
    std::vector<double> c(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) c[i] = std::sqrt(counts[i]) / denom;
    return ConcentrationVector(std::move(c));
}

std::vector<std::size_t> zero_count_tiles(const std::vector<double>& counts) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] == 0) out.push_back(i);
    return out;
}

double stationarity_residual(const ErrorObjective& obj, const ConcentrationVector& conc) {
    obj.validate();
    if (conc.size() != obj.counts.size()) throw Error("concentration vector size mismatch");
    if (conc.size() == 1) return 0.0;
    auto grad = objective_gradient(obj, conc);
    double mean = std::accumulate(grad.begin(), grad.end(), 0.0) / grad.size();
    double worst = 0.0;
    for (double g : grad) worst = std::max(worst, std::abs(g - mean));
    return worst;
}

std::vector<double> project_feasible(std::vector<double> v,
                                     const std::optional<std::pair<double, double>>& bounds,
                                     double floor) {
    std::size_t n = v.size();
    double lo = bounds ? std::max(bounds->first, floor) : floor;

    // Euclidean projection onto {c >= lo, sum c = 1}: shift by lo and project
    // the remainder onto the scaled simplex (sorting form of Duchi et al.).
    auto simplex = [&](std::vector<double>& x) {
        double budget = 1.0 - lo * static_cast<double>(n);
        if (budget <= 0) {  // infeasible floor; fall back to the uniform point
            std::fill(x.begin(), x.end(), 1.0 / n);
            return;
        }
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = x[i] - lo;
        std::vector<double> sorted(u);
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        double cumulative = 0.0, theta = 0.0;
        std::size_t support = 0;
        for (std::size_t k = 0; k < n; ++k) {
            cumulative += sorted[k];
            double candidate = (cumulative - budget) / static_cast<double>(k + 1);
            if (sorted[k] - candidate > 0) {
                theta = candidate;
                support = k + 1;
            }
        }
        (void)support;
        for (std::size_t i = 0; i < n; ++i) x[i] = std::max(u[i] - theta, 0.0) + lo;
    };

    simplex(v);
    if (bounds) {
        for (int round = 0; round < 100; ++round) {
            bool clipped = false;
            for (double& x : v) {
                if (x > bounds->second) {
                    x = bounds->second;
                    clipped = true;
                }
                if (x < bounds->first) {
                    x = bounds->first;
                    clipped = true;
                }
            }
            double sum = std::accumulate(v.begin(), v.end(), 0.0);
            if (!clipped && std::abs(sum - 1.0) <= 1e-14) break;
            simplex(v);
        }
    }
    return v;
}

MinimizeResult minimize_error_numeric(const ErrorObjective& obj, const ConcentrationVector& init,
                                      double tol, long long max_iterations) {
    obj.validate();
    if (!(tol > 0)) throw Error("tolerance must be positive");
    init.require_positive();
    if (!init.normalized(1e-9)) throw Error("initial concentrations must sum to 1");

    std::size_t n = obj.counts.size();
    MinimizeResult result;
    if (n == 1) {
        result.conc = ConcentrationVector({1.0});
        result.objective = 0.0;
        result.converged = true;
        return result;
    }

    std::vector<double> c = init.values;
    if (obj.bounds) c = project_feasible(std::move(c), obj.bounds);
    double value = total_growth_error(obj, ConcentrationVector(c));
    double step = 1.0;

    for (result.iterations = 0; result.iterations < max_iterations; ++result.iterations) {
        ConcentrationVector cur(c);
        result.residual = stationarity_residual(obj, cur);
        if (result.residual <= tol) {
            result.converged = true;
            break;
        }
        auto grad = objective_gradient(obj, cur);

        bool accepted = false;
        for (int halvings = 0; halvings < 70; ++halvings) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = c[i] - step * grad[i];
            trial = project_feasible(std::move(trial), obj.bounds);
            double trial_value = total_growth_error(obj, ConcentrationVector(trial));
            if (trial_value < value) {
                c = std::move(trial);
                value = trial_value;
                accepted = true;
                if (halvings == 0) step *= 1.6;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent direction at machine precision
    }

    result.conc = ConcentrationVector(c);
    result.objective = value;
    result.residual = stationarity_residual(obj, result.conc);
    if (result.residual <= tol) result.converged = true;
    return result;
}

}  // namespace tilesim
