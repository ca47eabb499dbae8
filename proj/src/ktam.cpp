#include "tilesim/ktam.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

#include "tilesim/rng.hpp"

namespace tilesim {

void KineticParams::validate() const {
    if (!(k_f > 0) || !(k_r > 0) || !(g_se > 0)) throw Error("k_f, k_r and G_se must be positive");
    if (!(lock_rate > 0)) throw Error("lock-in rate must be positive");
    if (!(c_min > 0) || !(c_max > 0) || c_min > c_max)
        throw Error("need 0 < c_min <= c_max");
}

std::vector<std::string> KineticParams::regime_warnings(int tau) const {
    std::vector<std::string> out;
    double below_tau = k_r * std::exp(-(tau - 1) * g_se);
    if (below_tau < 10.0 * k_f * c_max)
        out.push_back("sub-threshold attachments are not short-lived: k_r e^{-(tau-1)G_se} = " +
                      std::to_string(below_tau) + " < 10 k_f c_max");
    double at_tau = k_r * std::exp(-tau * g_se);
    if (k_f * c_min < 10.0 * at_tau)
        out.push_back("threshold attachments are not stable: k_f c_min < 10 k_r e^{-tau G_se}");
    return out;
}

KineticParams make_params(double k_f, double k_r, double g_se, const ConcentrationVector& conc,
                          std::optional<double> lock_rate) {
    KineticParams p;
    p.k_f = k_f;
    p.k_r = k_r;
    p.g_se = g_se;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double v : conc.values)
        if (v > 0) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > 0)) throw Error("concentration vector has no positive entries");
    p.c_min = lo;
    p.c_max = hi;
    p.lock_rate = lock_rate.value_or(2.0 * k_f * hi);
    p.validate();
    return p;
}

double forward_rate(int tile, const ConcentrationVector& conc, const KineticParams& params) {
    double c = conc.values.at(tile);
    if (!(c > 0)) throw Error("forward_rate needs a positive concentration");
    return params.k_f * c;
}

double reverse_rate(int matched_strength, const KineticParams& params) {
    if (matched_strength < 0) throw Error("matched strength must be >= 0");
    return params.k_r * std::exp(-matched_strength * params.g_se);
}

double epsilon(int mismatch_strength, int tau, const KineticParams& params) {
    if (mismatch_strength < 0 || mismatch_strength > tau)
        throw Error("mismatch strength must lie in [0, tau]");
    double r = params.lock_rate;
    if (r == 0) return 0.0;
    return r / (r + params.k_r * std::exp(-(tau - mismatch_strength) * params.g_se));
}

namespace {

int input_mismatch(const TileSystem& system, const std::vector<Dir>& inputs, int correct,
                   int wrong) {
    int m = 0;
    for (Dir d : inputs) {
        int gi = system.edge_glue(correct, d);
        if (gi != system.edge_glue(wrong, d)) m += system.glue_strength(gi);
    }
    return m;
}

}  // namespace

EpsilonMatrix epsilon_matrix(const TileSystem& system, const RectilinearReport& rect,
                             const KineticParams& params) {
    if (!rect.is_rectilinear)
        throw Error("epsilon matrix needs a rectilinear system (input edges undefined)");
    int n = static_cast<int>(system.tiles().size());
    EpsilonMatrix eps(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int m = input_mismatch(system, rect.input_edges, i, j);
            eps[i][j] = epsilon(std::min(m, system.temperature()), system.temperature(), params);
        }
    return eps;
}

std::vector<std::pair<int, int>> duplicate_input_pairs(const TileSystem& system,
                                                       const RectilinearReport& rect) {
    std::vector<std::pair<int, int>> out;
    int n = static_cast<int>(system.tiles().size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (input_mismatch(system, rect.input_edges, i, j) == 0) out.emplace_back(i, j);
    return out;
}

double site_error_probability(int correct_tile, const ConcentrationVector& conc,
                              const EpsilonMatrix& eps) {
    double ci = conc.values.at(correct_tile);
    if (!(ci > 0)) throw Error("site_error_probability needs c_i > 0");
    double sum = 0.0;
    for (std::size_t j = 0; j < conc.values.size(); ++j) {
        if (static_cast<int>(j) == correct_tile) continue;
        sum += eps[correct_tile][j] * conc.values[j];
    }
    return sum / ci;
}

double markov_site_oracle(int correct_tile, int wrong_tile, const ConcentrationVector& conc,
                          const KineticParams& params, int tau, int mismatch_strength) {
    double ci = conc.values.at(correct_tile);
    double cj = conc.values.at(wrong_tile);
    if (!(ci > 0)) throw Error("markov_site_oracle needs c_i > 0");
    double q = epsilon(mismatch_strength, tau, params);
    if (cj <= 0 || q == 0) return 0.0;
    return cj * q / (ci + cj * q);
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::FootprintFilled: return "footprint-filled";
        case Termination::EventBudget: return "event-budget";
        case Termination::TimeCap: return "time-cap";
        case Termination::Stuck: return "stuck";
    }
    return "?";
}

namespace {

// Fenwick tree over per-cell rates with O(log n) update and
// rate-proportional sampling.
class RateTree {
  public:
    explicit RateTree(std::size_t n)
        : n_(n), tree_(n + 1, 0.0), value_(n, 0.0), total_(0.0) {}

    void set(std::size_t i, double v) {
        double delta = v - value_[i];
        if (delta == 0.0) return;
        value_[i] = v;
        total_ += delta;
        for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
    }

    double value(std::size_t i) const { return value_[i]; }
    double total() const { return total_; }

    // first cell whose cumulative rate exceeds target
    std::size_t sample(double target) const {
        std::size_t idx = 0;
        for (std::size_t mask = std::bit_floor(n_); mask; mask >>= 1) {
            std::size_t next = idx + mask;
            if (next <= n_ && tree_[next] < target) {
                idx = next;
                target -= tree_[next];
            }
        }
        return std::min(idx, n_ - 1);
    }

    // recompute sums from the exact per-cell values, killing drift
    void rebuild() {
        std::fill(tree_.begin(), tree_.end(), 0.0);
        total_ = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            total_ += value_[i];
            std::size_t j = i + 1;
            tree_[j] += value_[i];
            std::size_t parent = j + (j & (~j + 1));
            if (parent <= n_) tree_[parent] += tree_[j];
        }
    }

  private:
    std::size_t n_;
    std::vector<double> tree_;
    std::vector<double> value_;
    double total_;
};

class LatticeSim {
  public:
    LatticeSim(const TileSystem& sys, const ConcentrationVector& conc, const KineticParams& params,
               const Assembly& reference, const SimOptions& options)
        : sys_(sys), c_(conc.values), p_(params), opt_(options) {
        if (c_.size() != sys.tiles().size())
            throw Error("concentration vector does not cover all tiles");
        for (int t = 0; t < static_cast<int>(c_.size()); ++t) {
            if (c_[t] < 0) throw Error("negative concentration");
            if (c_[t] > 0) active_.push_back(t);
        }

        int max_strength = 0;
        for (const Glue& g : sys.glues()) max_strength = std::max(max_strength, g.strength);
        detach_by_bond_.resize(4 * max_strength + 1);
        for (std::size_t b = 0; b < detach_by_bond_.size(); ++b)
            detach_by_bond_[b] = p_.k_r * std::exp(-static_cast<double>(b) * p_.g_se);

        int xmin = INT32_MAX, xmax = INT32_MIN, ymin = INT32_MAX, ymax = INT32_MIN;
        auto extend = [&](Pos p) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        };
        for (const auto& [pos, site] : sys.seed().cells()) extend(pos);
        for (const auto& [pos, site] : reference.final.cells()) extend(pos);
        if (xmin > xmax) throw Error("simulate needs a non-empty seed");

        allocate(xmin - 4, ymin - 4, (xmax - xmin) + 9, (ymax - ymin) + 9);
        for (const auto& [pos, site] : sys.seed().cells()) {
            std::size_t i = idx(pos);
            tile_[i] = site.tile;
            seed_[i] = 1;
        }
        for (const auto& [pos, site] : reference.final.cells())
            if (!site.seed) {
                foot_[idx(pos)] = 1;
                ++foot_total_;
            }
        recompute_all();
    }

    SimResult run(std::uint64_t rng_seed, const Budget& budget) {
        Rng rng(rng_seed);
        SimResult result;
        result.rng_seed = rng_seed;
        result.attach_counts.assign(sys_.tiles().size(), 0);

        std::uint64_t max_events =
            budget.max_events.value_or(50 * std::max<std::uint64_t>(foot_total_, 1));
        std::uint64_t events = 0;

        result.terminated_by = Termination::Stuck;
        while (true) {
            if (filled_ == foot_total_) {
                result.terminated_by = Termination::FootprintFilled;
                break;
            }
            if (events >= max_events) {
                result.terminated_by = Termination::EventBudget;
                break;
            }
            if (++since_rebuild_ > (1u << 22)) {
                tree_.rebuild();
                since_rebuild_ = 0;
            }
            double total = tree_.total();
            if (!(total > 1e-300)) {
                result.terminated_by = Termination::Stuck;
                break;
            }
            double wait = rng.exponential(total);
            if (result.elapsed + wait > budget.time_cap) {
                result.elapsed = budget.time_cap;
                result.terminated_by = Termination::TimeCap;
                break;
            }
            result.elapsed += wait;

            std::size_t cell = tree_.sample(rng.uniform() * total);
            if (!(tree_.value(cell) > 0)) {  // float drift; resample from exact sums
                tree_.rebuild();
                since_rebuild_ = 0;
                continue;
            }

            if (tile_[cell] >= 0) {
                apply_detach(cell, result);
            } else {
                apply_attach(cell, rng, result);
            }
            ++events;
        }

        for (std::size_t i = 0; i < tile_.size(); ++i)
            if (tile_[i] >= 0) result.final.place(pos(i), tile_[i], seed_[i] != 0);
        return result;
    }

  private:
    void allocate(int x0, int y0, int w, int h) {
        x0_ = x0;
        y0_ = y0;
        w_ = w;
        h_ = h;
        tile_.assign(static_cast<std::size_t>(w) * h, -1);
        seed_.assign(tile_.size(), 0);
        foot_.assign(tile_.size(), 0);
    }

    std::size_t idx(Pos p) const {
        return static_cast<std::size_t>(p.y - y0_) * w_ + static_cast<std::size_t>(p.x - x0_);
    }
    Pos pos(std::size_t i) const {
        return {x0_ + static_cast<int>(i % w_), y0_ + static_cast<int>(i / w_)};
    }
    bool in_grid(Pos p) const {
        return p.x >= x0_ && p.x < x0_ + w_ && p.y >= y0_ && p.y < y0_ + h_;
    }
    int tile_at(Pos p) const { return in_grid(p) ? tile_[idx(p)] : -1; }

    int bond_at(Pos p, int t) const {
        int b = 0;
        for (Dir d : kAllDirs) {
            int nb = tile_at(neighbor(p, d));
            if (nb >= 0) b += sys_.face_bond(t, d, nb);
        }
        return b;
    }

    double cell_rate(std::size_t i) const {
        if (seed_[i]) return 0.0;
        Pos p = pos(i);
        if (tile_[i] >= 0) {
            std::size_t b = static_cast<std::size_t>(bond_at(p, tile_[i]));
            return b < detach_by_bond_.size() ? detach_by_bond_[b]
                                              : p_.k_r * std::exp(-static_cast<double>(b) * p_.g_se);
        }
        bool adjacent = false;
        for (Dir d : kAllDirs)
            if (tile_at(neighbor(p, d)) >= 0) {
                adjacent = true;
                break;
            }
        if (!adjacent) return 0.0;
        int min_bond = opt_.allow_zero_bond ? 0 : 1;
        double mass = 0.0;
        for (int t : active_)
            if (bond_at(p, t) >= min_bond) mass += c_[t];
        return p_.k_f * mass;
    }

    void update_cell(Pos p) {
        if (in_grid(p)) tree_.set(idx(p), cell_rate(idx(p)));
    }

    void touch_neighborhood(Pos p) {
        update_cell(p);
        for (Dir d : kAllDirs) update_cell(neighbor(p, d));
    }

    void apply_attach(std::size_t cell, Rng& rng, SimResult& result) {
        Pos p = pos(cell);
        if (p.x - x0_ < 2 || p.y - y0_ < 2 || x0_ + w_ - p.x < 3 || y0_ + h_ - p.y < 3) {
            expand(p);
            cell = idx(p);
        }

        int min_bond = opt_.allow_zero_bond ? 0 : 1;
        double mass = 0.0;
        std::vector<std::pair<int, double>> candidates;
        candidates.reserve(active_.size());
        for (int t : active_)
            if (bond_at(p, t) >= min_bond) {
                candidates.emplace_back(t, c_[t]);
                mass += c_[t];
            }
        if (candidates.empty()) {  // stale cell rate; fix and carry on
            update_cell(p);
            return;
        }
        double pick = rng.uniform() * mass;
        int chosen = candidates.back().first;
        for (const auto& [t, w] : candidates) {
            if (pick < w) {
                chosen = t;
                break;
            }
            pick -= w;
        }

        int b = bond_at(p, chosen);
        tile_[cell] = chosen;
        if (foot_[cell]) ++filled_;
        ++result.attach_events;
        ++result.attach_counts[chosen];
        if (opt_.record_events) result.events.push_back({result.elapsed, true, p, chosen, b});
        touch_neighborhood(p);
    }

    void apply_detach(std::size_t cell, SimResult& result) {
        Pos p = pos(cell);
        int t = tile_[cell];
        int b = bond_at(p, t);
        tile_[cell] = -1;
        if (foot_[cell]) --filled_;
        ++result.detach_events;
        if (opt_.record_events) result.events.push_back({result.elapsed, false, p, t, b});
        touch_neighborhood(p);
    }

    void expand(Pos hot) {
        int grow_w = std::max(8, w_ / 2);
        int grow_h = std::max(8, h_ / 2);
        int nx0 = x0_, ny0 = y0_, nw = w_, nh = h_;
        if (hot.x - x0_ < 2) {
            nx0 -= grow_w;
            nw += grow_w;
        }
        if (x0_ + w_ - hot.x < 3) nw += grow_w;
        if (hot.y - y0_ < 2) {
            ny0 -= grow_h;
            nh += grow_h;
        }
        if (y0_ + h_ - hot.y < 3) nh += grow_h;

        std::vector<int> old_tile = std::move(tile_);
        std::vector<std::uint8_t> old_seed = std::move(seed_);
        std::vector<std::uint8_t> old_foot = std::move(foot_);
        int ox0 = x0_, oy0 = y0_, ow = w_, oh = h_;

        allocate(nx0, ny0, nw, nh);
        for (int yy = 0; yy < oh; ++yy)
            for (int xx = 0; xx < ow; ++xx) {
                std::size_t oi = static_cast<std::size_t>(yy) * ow + xx;
                if (old_tile[oi] < 0 && !old_foot[oi]) continue;
                std::size_t ni = idx({ox0 + xx, oy0 + yy});
                tile_[ni] = old_tile[oi];
                seed_[ni] = old_seed[oi];
                foot_[ni] = old_foot[oi];
            }
        recompute_all();
    }

    void recompute_all() {
        tree_ = RateTree(tile_.size());
        for (std::size_t i = 0; i < tile_.size(); ++i) {
            double r = cell_rate(i);
            if (r > 0) tree_.set(i, r);
        }
        since_rebuild_ = 0;
    }

    const TileSystem& sys_;
    const std::vector<double>& c_;
    const KineticParams& p_;
    SimOptions opt_;
    std::vector<int> active_;
    std::vector<double> detach_by_bond_;

    int x0_ = 0, y0_ = 0, w_ = 0, h_ = 0;
    std::vector<int> tile_;
    std::vector<std::uint8_t> seed_;
    std::vector<std::uint8_t> foot_;
    RateTree tree_{1};
    std::uint64_t foot_total_ = 0;
    std::uint64_t filled_ = 0;
    std::uint32_t since_rebuild_ = 0;
};

}  // namespace

SimResult simulate(const TileSystem& system, const ConcentrationVector& conc,
                   const KineticParams& params, std::uint64_t rng_seed, const Budget& budget,
                   const Assembly& reference, const SimOptions& options) {
    params.validate();
    LatticeSim sim(system, conc, params, reference, options);
    return sim.run(rng_seed, budget);
}

SimResult simulate(const TileSystem& system, const ConcentrationVector& conc,
                   const KineticParams& params, std::uint64_t rng_seed, const Budget& budget,
                   const SimOptions& options) {
    Assembly reference = terminal_assembly(system, 1u << 20);
    return simulate(system, conc, params, rng_seed, budget, reference, options);
}

ErrorReport classify_errors(const Configuration& final, const Assembly& reference) {
    ErrorReport report;
    for (const auto& [pos, site] : final.cells()) {
        if (site.seed) continue;
        const Site* ref = reference.final.at(pos);
        if (ref == nullptr) {
            ++report.facet_errors;
            report.per_position.push_back({pos, -1, site.tile});
        } else if (ref->tile != site.tile) {
            ++report.growth_errors;
            report.per_position.push_back({pos, ref->tile, site.tile});
        }
    }
    for (const auto& [pos, site] : reference.final.cells())
        if (!site.seed && !final.occupied(pos)) report.incomplete.push_back(pos);
    std::sort(report.incomplete.begin(), report.incomplete.end());
    std::sort(report.per_position.begin(), report.per_position.end(),
              [](const ErrorRecord& a, const ErrorRecord& b) { return a.pos < b.pos; });
    return report;
}

std::vector<SimResult> run_batch(const TileSystem& system, const ConcentrationVector& conc,
                                 const KineticParams& params, const Budget& budget,
                                 std::uint64_t master_seed, int runs, int jobs,
                                 const Assembly& reference, const SimOptions& options) {
    if (runs < 0) throw Error("run count must be non-negative");
    std::vector<SimResult> results(runs);
    if (runs == 0) return results;
    jobs = std::clamp(jobs, 1, runs);

    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= runs) return;
            results[i] = simulate(system, conc, params, stream_seed(master_seed, i), budget,
                                  reference, options);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

}  // namespace tilesim
