#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqabench/optimize.hpp"

namespace vqabench {

/// Restart-averaged distribution per evaluation count:
/// P_n(e) = (1/G) sum_g P_{n,g}(e) over G restarts of one instance.
struct AggregatedDistributionCurve {
    std::string instance_id;
    int n_vars = 0;
    int depth = 0;
    int max_evals = 0;
    OptimizerKind optimizer = OptimizerKind::nelder_mead;
    ObjectiveKind objective;
    int restart_count = 0;
    std::vector<QualityDistribution> per_eval;  // index n-1
};

inline AggregatedDistributionCurve aggregate_restarts(
    std::span<const EvaluationTrace> traces) {
    if (traces.empty())
        throw std::invalid_argument("aggregate_restarts: no traces");
    const auto& first = traces.front();
    for (const auto& t : traces) {
        if (t.instance_id != first.instance_id || t.n_vars != first.n_vars ||
            t.depth != first.depth || t.max_evals != first.max_evals ||
            t.optimizer != first.optimizer || !(t.objective == first.objective))
            throw std::invalid_argument(
                "aggregate_restarts: traces disagree on instance or settings");
        if (t.snapshots.size() != static_cast<std::size_t>(t.max_evals))
            throw std::invalid_argument(
                "aggregate_restarts: trace snapshots not padded to max_evals");
    }

    AggregatedDistributionCurve agg;
    agg.instance_id = first.instance_id;
    agg.n_vars = first.n_vars;
    agg.depth = first.depth;
    agg.max_evals = first.max_evals;
    agg.optimizer = first.optimizer;
    agg.objective = first.objective;
    agg.restart_count = static_cast<int>(traces.size());
    agg.per_eval.resize(static_cast<std::size_t>(first.max_evals));

    const double inv_g = 1.0 / static_cast<double>(traces.size());
    std::map<double, double> mass;
    for (std::size_t n = 0; n < agg.per_eval.size(); ++n) {
        mass.clear();
        for (const auto& t : traces)
            for (const auto& entry : t.snapshots[n].distribution.entries)
                mass[entry.energy] += entry.probability;
        auto& dist = agg.per_eval[n];
        dist.entries.reserve(mass.size());
        for (const auto& [e, p] : mass) dist.entries.push_back({e, p * inv_g});
    }
    return agg;
}

/// Optimal-stopping quantities versus the evaluation budget n at a fixed cost
/// per circuit evaluation c. One draw of the stopped sequence is an
/// independent optimizer run of n evaluations, so the per-draw cost is c*n and
/// the optimal effort is reported in evaluation units, n * expected_draws.
struct BenchmarkPoint {
    double cost;    // C*_n(c)
    double evals;   // n*_n(c) = n * expected_draws
    double energy;  // E*_n(c)
};

struct BenchmarkCurve {
    std::string instance_id;
    double c = 0.0;
    std::int64_t ground_energy = 0;
    std::vector<BenchmarkPoint> per_eval;  // index n-1
    int argmin_evals = 1;                  // smallest minimizing n
    double min_cost = 0.0;
};

inline BenchmarkCurve benchmark_curve(const AggregatedDistributionCurve& agg,
                                      double c, std::int64_t ground_energy) {
    if (!(c > 0.0))
        throw std::invalid_argument("benchmark_curve: c must be > 0");
    BenchmarkCurve curve;
    curve.instance_id = agg.instance_id;
    curve.c = c;
    curve.ground_energy = ground_energy;
    curve.per_eval.reserve(agg.per_eval.size());
    curve.min_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < agg.per_eval.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const StoppingSolution sol = solve_optimal_cost(agg.per_eval[i], c * n);
        curve.per_eval.push_back(
            {sol.optimal_cost, n * sol.expected_draws, sol.optimal_energy});
        if (sol.optimal_cost < curve.min_cost) {
            curve.min_cost = sol.optimal_cost;
            curve.argmin_evals = static_cast<int>(i + 1);
        }
    }
    return curve;
}

/// Budget-optimized stopping quantities over a cost grid: for each c the
/// evaluation count is chosen to minimize C*_n(c). Also carries the two
/// asymptote references: the small-c line slope min_n n / P_n(e_g) and the
/// large-c mean energy of the single-evaluation distribution.
struct CostSweepPoint {
    double c;
    double cost;    // C*(c) after minimizing over n
    double evals;   // n*(c) in evaluation units
    double energy;  // E*(c)
    int argmin_evals;
};

struct CostSweep {
    std::string instance_id;
    std::int64_t ground_energy = 0;
    std::vector<CostSweepPoint> points;
    double tts_reference = std::numeric_limits<double>::infinity();
    double mean_energy_reference = 0.0;
};

inline CostSweep cost_sweep(const AggregatedDistributionCurve& agg,
                            std::span<const double> c_values,
                            std::int64_t ground_energy) {
    if (agg.per_eval.empty())
        throw std::invalid_argument("cost_sweep: empty aggregated curve");
    for (std::size_t i = 0; i < c_values.size(); ++i) {
        if (!(c_values[i] > 0.0))
            throw std::invalid_argument("cost_sweep: all c must be > 0");
        if (i > 0 && !(c_values[i - 1] < c_values[i]))
            throw std::invalid_argument("cost_sweep: c values must be ascending");
    }

    CostSweep sweep;
    sweep.instance_id = agg.instance_id;
    sweep.ground_energy = ground_energy;
    sweep.points.reserve(c_values.size());
    for (const double c : c_values) {
        const BenchmarkCurve curve = benchmark_curve(agg, c, ground_energy);
        const auto& best = curve.per_eval[static_cast<std::size_t>(curve.argmin_evals - 1)];
        sweep.points.push_back(
            {c, best.cost, best.evals, best.energy, curve.argmin_evals});
    }

    const double e_g = static_cast<double>(ground_energy);
    for (std::size_t i = 0; i < agg.per_eval.size(); ++i) {
        const double p_g = agg.per_eval[i].probability_of(e_g);
        if (p_g > 0.0)
            sweep.tts_reference =
                std::min(sweep.tts_reference, static_cast<double>(i + 1) / p_g);
    }
    sweep.mean_energy_reference = average_energy(agg.per_eval.front());
    return sweep;
}

/// Percentile by linear interpolation between closest ranks on the sorted
/// sample (the convention used by numpy's default quantile).
inline double percentile(std::vector<double> values, double p) {
    if (values.empty())
        throw std::invalid_argument("percentile: empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

enum class SummaryQuantity { cost_above_ground, optimal_evals, energy_above_ground };

struct SummaryMeta {
    int n_vars = 0;
    int instance_count = 0;
    OptimizerKind optimizer = OptimizerKind::nelder_mead;
    ObjectiveKind objective;
};

/// Median and quartiles of one shifted quantity across instances, per x value
/// (evaluation count or cost c). Energies are shifted by each instance's own
/// ground energy.
struct EnsembleSummary {
    SummaryQuantity quantity = SummaryQuantity::cost_above_ground;
    SummaryMeta meta;
    std::vector<double> x;
    std::vector<double> median;
    std::vector<double> p25;
    std::vector<double> p75;
};

namespace detail {

inline double select_quantity(SummaryQuantity q, const BenchmarkPoint& pt,
                              std::int64_t e_g) {
    switch (q) {
        case SummaryQuantity::cost_above_ground:
            return pt.cost - static_cast<double>(e_g);
        case SummaryQuantity::optimal_evals:
            return pt.evals;
        case SummaryQuantity::energy_above_ground:
            return pt.energy - static_cast<double>(e_g);
    }
    throw std::logic_error("select_quantity: unknown quantity");
}

inline void fill_percentiles(EnsembleSummary& summary,
                             std::vector<std::vector<double>>& per_x_samples) {
    summary.median.reserve(per_x_samples.size());
    summary.p25.reserve(per_x_samples.size());
    summary.p75.reserve(per_x_samples.size());
    for (auto& samples : per_x_samples) {
        summary.p25.push_back(percentile(samples, 0.25));
        summary.median.push_back(percentile(samples, 0.50));
        summary.p75.push_back(percentile(std::move(samples), 0.75));
    }
}

}  // namespace detail

/// Summary over per-instance benchmark curves; x is the evaluation count.
inline EnsembleSummary ensemble_summary(std::span<const BenchmarkCurve> curves,
                                        SummaryQuantity quantity,
                                        SummaryMeta meta) {
    if (curves.empty())
        throw std::invalid_argument("ensemble_summary: no instances");
    const std::size_t points = curves.front().per_eval.size();
    for (const auto& c : curves)
        if (c.per_eval.size() != points)
            throw std::invalid_argument("ensemble_summary: curve lengths differ");

    EnsembleSummary summary;
    summary.quantity = quantity;
    summary.meta = meta;
    summary.meta.instance_count = static_cast<int>(curves.size());
    summary.x.reserve(points);
    std::vector<std::vector<double>> samples(points);
    for (std::size_t i = 0; i < points; ++i) {
        summary.x.push_back(static_cast<double>(i + 1));
        samples[i].reserve(curves.size());
        for (const auto& c : curves)
            samples[i].push_back(
                detail::select_quantity(quantity, c.per_eval[i], c.ground_energy));
    }
    detail::fill_percentiles(summary, samples);
    return summary;
}

/// Summary over per-instance cost sweeps; x is the cost c.
inline EnsembleSummary ensemble_summary(std::span<const CostSweep> sweeps,
                                        SummaryQuantity quantity,
                                        SummaryMeta meta) {
    if (sweeps.empty())
        throw std::invalid_argument("ensemble_summary: no instances");
    const std::size_t points = sweeps.front().points.size();
    for (const auto& s : sweeps)
        if (s.points.size() != points)
            throw std::invalid_argument("ensemble_summary: sweep lengths differ");

    EnsembleSummary summary;
    summary.quantity = quantity;
    summary.meta = meta;
    summary.meta.instance_count = static_cast<int>(sweeps.size());
    summary.x.reserve(points);
    std::vector<std::vector<double>> samples(points);
    for (std::size_t i = 0; i < points; ++i) {
        summary.x.push_back(sweeps.front().points[i].c);
        samples[i].reserve(sweeps.size());
        for (const auto& s : sweeps) {
            const auto& pt = s.points[i];
            samples[i].push_back(detail::select_quantity(
                quantity, {pt.cost, pt.evals, pt.energy}, s.ground_energy));
        }
    }
    detail::fill_percentiles(summary, samples);
    return summary;
}

/// One row of the size-scaling table: statistics of C*(c) - e_g at one (N, c).
struct ScalingRow {
    int n_vars;
    double c;
    double median;
    double p25;
    double p75;
};

/// Size-scaling table from per-N cost-sweep summaries (quantity
/// cost_above_ground, x = c). Each requested c must be present in every
/// summary's grid.
inline std::vector<ScalingRow> scaling_report(
    std::span<const EnsembleSummary> summaries, std::span<const double> c_values) {
    if (summaries.empty())
        throw std::invalid_argument("scaling_report: no summaries");
    std::vector<int> sizes;
    for (const auto& s : summaries) sizes.push_back(s.meta.n_vars);
    std::sort(sizes.begin(), sizes.end());
    if (std::unique(sizes.begin(), sizes.end()) - sizes.begin() < 2)
        throw std::invalid_argument("scaling_report: needs at least 2 distinct N");

    std::vector<ScalingRow> rows;
    for (const double c : c_values) {
        for (const auto& s : summaries) {
            std::size_t idx = s.x.size();
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (std::abs(s.x[i] - c) <= 1e-12 * std::max(1.0, std::abs(c))) {
                    idx = i;
                    break;
                }
            }
            if (idx == s.x.size())
                throw std::invalid_argument(
                    "scaling_report: c value missing from a summary grid");
            rows.push_back({s.meta.n_vars, c, s.median[idx], s.p25[idx], s.p75[idx]});
        }
    }
    return rows;
}

/// Log-spaced grid from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw std::invalid_argument("log_grid: requires 0 < lo < hi and count >= 2");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = (std::log(hi) - std::log(lo)) / (count - 1);
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace vqabench
