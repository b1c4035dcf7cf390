#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vqabench/distribution.hpp"
#include "vqabench/rng.hpp"

namespace vqabench {

enum class StoppingRegime { ground_only, interior, all_levels };

/// Solution of the optimal-stopping problem for i.i.d. draws from a discrete
/// quality distribution with a fixed cost kappa per draw.
struct StoppingSolution {
    double optimal_cost;    // C*, minimal expected total cost
    double expected_draws;  // mean number of draws under the optimal rule
    double optimal_energy;  // expected accepted energy E*
    double per_draw_cost;   // kappa
    StoppingRegime regime;

    /// C* = E* + kappa * expected_draws by construction.
    double expected_effort() const { return per_draw_cost * expected_draws; }
};

/// Minimal expected total cost of stopping a sequence of i.i.d. draws
/// e_1, e_2, ... from `dist`, where halting after n draws costs
/// min(e_1..e_n) + n * kappa. The optimal rule accepts the first draw with
/// e_n <= C*, and C* is the unique root of
///
///   sum_{a : e_a <= C*} (C* - e_a) p_a = kappa.
///
/// The left side is piecewise linear and increasing in C*, so the root is
/// found exactly by scanning prefixes of the ascending energy list: the
/// prefix-k candidate is
///
///   C_k = (kappa + sum_{a<=k} e_a p_a) / sum_{a<=k} p_a
///
/// and the first k with C_k < e_{k+1} is the solution (the last prefix has no
/// upper bound). A candidate exactly equal to e_{k+1} is carried to the next
/// prefix, which yields the identical C*; the reported regime and draw count
/// then include the boundary level.
///
/// kappa = 0 returns the small-cost limit directly: C* = e_min with
/// expected_draws = 1 / p(e_min).
inline StoppingSolution solve_optimal_cost(const QualityDistribution& dist,
                                           double kappa) {
    if (dist.empty())
        throw std::invalid_argument("solve_optimal_cost: empty distribution");
    if (!(kappa >= 0.0))
        throw std::invalid_argument("solve_optimal_cost: kappa must be >= 0");

    const auto& e = dist.entries;
    const std::size_t levels = e.size();

    double cum_p = 0.0;
    double cum_ep = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
        cum_p += e[k].probability;
        cum_ep += e[k].energy * e[k].probability;
        const double candidate = (kappa + cum_ep) / cum_p;
        if (k + 1 == levels || candidate < e[k + 1].energy) {
            StoppingSolution sol;
            sol.optimal_cost = candidate;
            sol.expected_draws = 1.0 / cum_p;
            sol.optimal_energy = cum_ep / cum_p;
            sol.per_draw_cost = kappa;
            sol.regime = (k + 1 == levels) ? StoppingRegime::all_levels
                         : (k == 0)        ? StoppingRegime::ground_only
                                           : StoppingRegime::interior;
            return sol;
        }
    }
    throw std::logic_error("solve_optimal_cost: prefix scan found no solution");
}

/// Expected time to first draw of the lowest energy: t_run / p(e_min).
/// This is the exact small-cost limit of (C*(c) - e_min) / c with
/// kappa = c * t_run.
inline double time_to_solution(const QualityDistribution& dist, double t_run) {
    if (dist.empty())
        throw std::invalid_argument("time_to_solution: empty distribution");
    if (!(t_run > 0.0))
        throw std::invalid_argument("time_to_solution: t_run must be > 0");
    return t_run / dist.entries.front().probability;
}

/// Mean energy sum_a e_a p_a, the large-cost limit of C*(kappa) - kappa.
inline double average_energy(const QualityDistribution& dist) {
    if (dist.empty())
        throw std::invalid_argument("average_energy: empty distribution");
    double s = 0.0;
    for (const auto& entry : dist.entries) s += entry.energy * entry.probability;
    return s;
}

struct MonteCarloEstimate {
    double mean_cost;
    double std_error;
};

/// Monte Carlo realization of the threshold stopping rule: each trial draws
/// i.i.d. energies from `dist` until e_n <= threshold and pays
/// min(e_1..e_n) + n * kappa. Returns the sample mean and standard error over
/// `trials` trials. A single trial is capped at 10^9 draws.
inline MonteCarloEstimate simulate_stopping(const QualityDistribution& dist,
                                            double kappa, double threshold,
                                            std::int64_t trials,
                                            std::uint64_t seed) {
    if (dist.empty())
        throw std::invalid_argument("simulate_stopping: empty distribution");
    if (!(kappa >= 0.0))
        throw std::invalid_argument("simulate_stopping: kappa must be >= 0");
    if (threshold < dist.min_energy())
        throw std::invalid_argument(
            "simulate_stopping: threshold below lowest energy, rule never stops");
    if (trials < 1)
        throw std::invalid_argument("simulate_stopping: trials must be >= 1");

    std::vector<double> cumulative;
    cumulative.reserve(dist.size());
    double acc = 0.0;
    for (const auto& entry : dist.entries) {
        acc += entry.probability;
        cumulative.push_back(acc);
    }
    cumulative.back() = std::max(cumulative.back(), 1.0);

    constexpr std::int64_t kDrawCap = 1000000000;
    SplitMix64 rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t t = 0; t < trials; ++t) {
        double best = std::numeric_limits<double>::infinity();
        std::int64_t n = 0;
        for (;;) {
            const double u = rng.next_unit();
            const auto it =
                std::upper_bound(cumulative.begin(), cumulative.end(), u);
            const std::size_t idx = std::min(
                static_cast<std::size_t>(it - cumulative.begin()), dist.size() - 1);
            const double drawn = dist.entries[idx].energy;
            ++n;
            best = std::min(best, drawn);
            if (drawn <= threshold) break;
            if (n >= kDrawCap)
                throw std::runtime_error(
                    "simulate_stopping: trial exceeded the draw cap");
        }
        const double cost = best + static_cast<double>(n) * kappa;
        sum += cost;
        sum_sq += cost * cost;
    }

    MonteCarloEstimate est;
    est.mean_cost = sum / static_cast<double>(trials);
    if (trials > 1) {
        const double var =
            std::max(0.0, (sum_sq - sum * sum / static_cast<double>(trials)) /
                              static_cast<double>(trials - 1));
        est.std_error = std::sqrt(var / static_cast<double>(trials));
    } else {
        est.std_error = 0.0;
    }
    return est;
}

}  // namespace vqabench
