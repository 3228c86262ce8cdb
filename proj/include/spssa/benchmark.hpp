#pragma once
//
// Monte Carlo harnesses: separation performance with known q, rank
// estimation frequencies, and scatter-matrix norms on stationary data.
//
// Trial t of (setting, side length) draws its data from
//   Rng(seed).child(setting).child(side).child(t)
// so every method and partition is evaluated on the same draws, and results
// do not depend on which other configurations run alongside.
//

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spssa/error.hpp"
#include "spssa/fit.hpp"
#include "spssa/rank.hpp"
#include "spssa/rng.hpp"
#include "spssa/scatter.hpp"
#include "spssa/simulation.hpp"
#include "spssa/spatial_core.hpp"

namespace spssa {

struct GridSpec {
    int rows = 3;
    int cols = 3;

    std::string label() const { return std::to_string(rows) + "x" + std::to_string(cols); }
    bool operator==(const GridSpec&) const = default;
};

/// A method under evaluation; `std::nullopt` is the random baseline.
using BenchMethod = std::optional<Method>;

inline std::string to_string(const BenchMethod& m) { return m ? to_string(*m) : "baseline"; }

inline BenchMethod parse_bench_method(const std::string& s) {
    if (s == "baseline")
        return std::nullopt;
    return parse_method(s);
}

inline Rng trial_rng(std::uint64_t seed, int setting, int side, int trial) {
    return Rng(seed).child(static_cast<std::uint64_t>(setting)).child(static_cast<std::uint64_t>(side)).child(
        static_cast<std::uint64_t>(trial));
}

inline Partition domain_grid(const Locations& loc, int side, const GridSpec& grid) {
    const double s = side;
    return build_grid_partition(loc, grid.rows, grid.cols, Rect{0.0, s, 0.0, s});
}

/// Linear-interpolation quantile (type 7) of unsorted values.
inline double quantile(std::vector<double> v, double prob) {
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = prob * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// Separation performance

struct PerformanceConfig {
    std::vector<int> settings{1, 2, 3, 4};
    std::vector<int> side_lengths{20, 30};
    std::vector<GridSpec> partitions{{2, 2}, {3, 3}, {4, 4}};
    std::vector<BenchMethod> methods{Method::sir, Method::save, Method::cor, Method::comb, std::nullopt};
    int trials = 100;
    double kernel_radius = 3.4;
    bool scaled = true;
    std::uint64_t seed = 1;
};

struct TrialRecord {
    int setting = 0;
    int side_length = 0;
    GridSpec partition;
    BenchMethod method;
    int trial = 0;
    bool ok = true;
    double s_perf = 0.0;
    double n_perf = 0.0;
    std::string error;
};

struct PerformanceSummary {
    int setting = 0;
    int side_length = 0;
    GridSpec partition;
    BenchMethod method;
    int trials = 0;
    int failures = 0;
    double s_mean = 0, s_q25 = 0, s_median = 0, s_q75 = 0;
    double n_mean = 0, n_q25 = 0, n_median = 0, n_q75 = 0;
};

struct PerformanceResult {
    std::vector<TrialRecord> records;
    std::vector<PerformanceSummary> summary;
};

inline std::vector<PerformanceSummary> summarize(const std::vector<TrialRecord>& records) {
    std::vector<PerformanceSummary> out;
    // group in first-appearance order of (setting, side, partition, method)
    std::vector<std::vector<const TrialRecord*>> groups;
    for (const auto& r : records) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
            const auto* h = g.front();
            return h->setting == r.setting && h->side_length == r.side_length && h->partition == r.partition &&
                   h->method == r.method;
        });
        if (it == groups.end())
            groups.push_back({&r});
        else
            it->push_back(&r);
    }
    for (const auto& g : groups) {
        PerformanceSummary s;
        s.setting = g.front()->setting;
        s.side_length = g.front()->side_length;
        s.partition = g.front()->partition;
        s.method = g.front()->method;
        std::vector<double> sp, np;
        for (const auto* r : g) {
            if (!r->ok) {
                ++s.failures;
                continue;
            }
            sp.push_back(r->s_perf);
            np.push_back(r->n_perf);
        }
        s.trials = static_cast<int>(sp.size());
        s.s_mean = mean_of(sp);
        s.s_q25 = quantile(sp, 0.25);
        s.s_median = quantile(sp, 0.5);
        s.s_q75 = quantile(sp, 0.75);
        s.n_mean = mean_of(np);
        s.n_q25 = quantile(np, 0.25);
        s.n_median = quantile(np, 0.5);
        s.n_q75 = quantile(np, 0.75);
        out.push_back(s);
    }
    return out;
}

/// s_perf and n_perf of a fit against the simulation truth.
inline std::pair<double, double> performance_of(const SsaFit& fit, const GroundTruth& truth) {
    return {subspace_distance(truth.p_s, projector_of(fit.w_s)), subspace_distance(truth.p_n, projector_of(fit.w_n))};
}

/// Runs one trial of one (setting, side) cell over every partition and method.
inline std::vector<TrialRecord> performance_trial(const PerformanceConfig& cfg, int setting, int side, int trial) {
    std::vector<TrialRecord> out;
    const Rng rng = trial_rng(cfg.seed, setting, side, trial);
    std::optional<SimulatedData> sim;
    std::string gen_error;
    try {
        sim = generate_setting({setting, side}, rng);
    } catch (const Error& e) {
        gen_error = e.what();
    }
    MethodSpec base;
    base.kernels = {KernelSpec::ball(cfg.kernel_radius)};
    base.scaled = cfg.scaled;
    std::optional<std::vector<NeighborGraph>> graphs;
    if (sim)
        graphs = kernel_graphs(sim->data.locations, base);

    for (const auto& grid : cfg.partitions) {
        for (const auto& method : cfg.methods) {
            TrialRecord rec;
            rec.setting = setting;
            rec.side_length = side;
            rec.partition = grid;
            rec.method = method;
            rec.trial = trial;
            try {
                if (!sim)
                    throw NumericalError(gen_error);
                const auto part = domain_grid(sim->data.locations, side, grid);
                SsaFit fit;
                if (method) {
                    MethodSpec spec = base;
                    spec.method = *method;
                    fit = fit_spssa(sim->data, part, spec, kSimQ, &*graphs);
                } else {
                    Rng baseline_rng = rng.child(99);
                    fit = random_baseline(sim->data, kSimQ, baseline_rng);
                }
                std::tie(rec.s_perf, rec.n_perf) = performance_of(fit, sim->truth);
            } catch (const Error& e) {
                rec.ok = false;
                rec.error = e.what();
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

inline PerformanceResult run_performance_benchmark(const PerformanceConfig& cfg) {
    if (cfg.trials < 1)
        throw ConfigError("trials", "trials must be >= 1");
    PerformanceResult res;
    for (int setting : cfg.settings) {
        SettingConfig{setting, 20}.validate();
        for (int side : cfg.side_lengths)
            for (int t = 0; t < cfg.trials; ++t)
                for (auto& r : performance_trial(cfg, setting, side, t))
                    res.records.push_back(std::move(r));
    }
    res.summary = summarize(res.records);
    return res;
}

// ---------------------------------------------------------------------------
// Rank estimation

struct RankConfig {
    int setting = 4;
    int side_length = 60;
    GridSpec partition{4, 4};
    std::vector<Method> methods{Method::sir, Method::save, Method::cor, Method::comb};
    int r = 10;
    int s = 10;
    int trials = 100;
    double kernel_radius = 3.4;
    bool scaled = true;
    std::uint64_t seed = 1;
};

struct RankRecord {
    Method method = Method::comb;
    int trial = 0;
    bool ok = true;
    int q_hat = -1;
    std::string error;
};

struct RankResult {
    RankConfig config;
    std::vector<RankRecord> records;

    /// q_hat -> count for one method (failures excluded).
    std::map<int, int> counts(Method m) const {
        std::map<int, int> c;
        for (const auto& r : records)
            if (r.method == m && r.ok)
                ++c[r.q_hat];
        return c;
    }

    int failures(Method m) const {
        return static_cast<int>(
            std::count_if(records.begin(), records.end(), [&](const auto& r) { return r.method == m && !r.ok; }));
    }

    double proportion(Method m, int q) const {
        const auto c = counts(m);
        int total = 0;
        for (const auto& [k, v] : c)
            total += v;
        const auto it = c.find(q);
        return total == 0 || it == c.end() ? 0.0 : static_cast<double>(it->second) / total;
    }

    /// Most frequent estimate; ties go to the smaller q.
    int mode(Method m) const {
        int best = -1, best_count = 0;
        for (const auto& [k, v] : counts(m))
            if (v > best_count) {
                best = k;
                best_count = v;
            }
        return best;
    }
};

inline RankResult run_rank_benchmark(const RankConfig& cfg) {
    SettingConfig{cfg.setting, cfg.side_length}.validate();
    if (cfg.trials < 1)
        throw ConfigError("trials", "trials must be >= 1");
    RankResult res{cfg, {}};
    MethodSpec base;
    base.kernels = {KernelSpec::ball(cfg.kernel_radius)};
    base.scaled = cfg.scaled;
    for (int t = 0; t < cfg.trials; ++t) {
        const Rng rng = trial_rng(cfg.seed, cfg.setting, cfg.side_length, t);
        std::optional<SimulatedData> sim;
        std::string gen_error;
        try {
            sim = generate_setting({cfg.setting, cfg.side_length}, rng);
        } catch (const Error& e) {
            gen_error = e.what();
        }
        for (Method m : cfg.methods) {
            RankRecord rec;
            rec.method = m;
            rec.trial = t;
            try {
                if (!sim)
                    throw NumericalError(gen_error);
                MethodSpec spec = base;
                spec.method = m;
                const auto part = domain_grid(sim->data.locations, cfg.side_length, cfg.partition);
                rec.q_hat = ladle_curves(sim->data, part, spec, cfg.r, cfg.s,
                                         rng.child(200 + static_cast<std::uint64_t>(m)))
                                .q_hat;
            } catch (const Error& e) {
                rec.ok = false;
                rec.error = e.what();
            }
            res.records.push_back(std::move(rec));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Scatter norms on stationary data

struct NormConfig {
    int trials = 100;
    int side_length = 50;  // n = side^2
    int dimension = 5;
    double kernel_radius = 2.2;
    std::vector<GridSpec> partitions{{2, 2}, {3, 3}, {4, 4}};
    std::uint64_t seed = 1;
};

struct NormRow {
    GridSpec partition;
    int trials = 0;
    double m_mean = 0.0;
    double m_var = 0.0;
    double m_cor_scaled = 0.0;
    double m_cor = 0.0;
};

/// Frobenius norms of M_mean, M_var, scaled M_cor and unscaled M_cor for one
/// mixed stationary draw, per partition.
inline std::vector<std::array<double, 4>> stationary_norms(const NormConfig& cfg, int trial) {
    Rng rng = Rng(cfg.seed).child(0x4E4F524DULL).child(static_cast<std::uint64_t>(trial));
    Rng loc_rng = rng.child(1), field_rng = rng.child(2), mix_rng = rng.child(4);
    const auto n = static_cast<Index>(cfg.side_length) * cfg.side_length;
    const Locations loc = sample_uniform_locations(cfg.side_length, n, loc_rng);
    const Eigen::MatrixXd s = sample_grf_columns(loc, kStationaryMatern, cfg.dimension, field_rng);
    const Eigen::MatrixXd a = random_orthogonal(cfg.dimension, mix_rng);
    const auto w = whiten(SpatialDataset{loc, s * a.transpose()});
    const KernelSpec kernel = KernelSpec::ball(cfg.kernel_radius);
    const auto graph = build_neighbor_graph(loc, kernel);

    std::vector<std::array<double, 4>> out;
    for (const auto& grid : cfg.partitions) {
        const auto part = domain_grid(loc, cfg.side_length, grid);
        out.push_back({compute_m_mean(w.whitened, part).matrix.norm(), compute_m_var(w.whitened, part).matrix.norm(),
                       compute_m_cor(w.whitened, part, graph, kernel, true).matrix.norm(),
                       compute_m_cor(w.whitened, part, graph, kernel, false).matrix.norm()});
    }
    return out;
}

inline std::vector<NormRow> run_norm_table(const NormConfig& cfg) {
    if (cfg.trials < 1)
        throw ConfigError("trials", "trials must be >= 1");
    std::vector<NormRow> rows;
    for (const auto& g : cfg.partitions)
        rows.push_back({g, 0});
    for (int t = 0; t < cfg.trials; ++t) {
        const auto norms = stationary_norms(cfg, t);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i].m_mean += norms[i][0];
            rows[i].m_var += norms[i][1];
            rows[i].m_cor_scaled += norms[i][2];
            rows[i].m_cor += norms[i][3];
            ++rows[i].trials;
        }
    }
    for (auto& r : rows) {
        r.m_mean /= r.trials;
        r.m_var /= r.trials;
        r.m_cor_scaled /= r.trials;
        r.m_cor /= r.trials;
    }
    return rows;
}

}  // namespace spssa
