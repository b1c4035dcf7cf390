#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vqabench/simulator.hpp"
#include "vqabench/stopping.hpp"

namespace vqabench {

/// Scalar objective computed from a measured quality distribution. Either the
/// mean energy or the optimal stopping cost C* at a fixed per-draw cost c.
struct ObjectiveKind {
    enum class Kind { mean_energy, optimal_cost };

    Kind kind = Kind::mean_energy;
    double c = 0.0;

    static ObjectiveKind mean_energy() { return {Kind::mean_energy, 0.0}; }
    static ObjectiveKind optimal_cost(double c) {
        if (!(c > 0.0))
            throw std::invalid_argument("ObjectiveKind: optimal-cost requires c > 0");
        return {Kind::optimal_cost, c};
    }

    bool operator==(const ObjectiveKind&) const = default;
};

inline double objective_value(const QualityDistribution& dist,
                              const ObjectiveKind& objective) {
    if (objective.kind == ObjectiveKind::Kind::mean_energy)
        return average_energy(dist);
    return solve_optimal_cost(dist, objective.c).optimal_cost;
}

enum class OptimizerKind { nelder_mead, quasi_newton };

enum class TerminationReason { converged, budget_exhausted, stalled, aborted };

/// Record of one optimizer run. `values` holds the objective at every function
/// evaluation in call order; the best point is tracked over all evaluations.
struct OptimizerRun {
    std::vector<double> best_point;
    double best_value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    std::optional<int> converged_at;  // evaluation count when tolerance was met
    TerminationReason termination = TerminationReason::budget_exhausted;
    std::string error;
    std::vector<double> values;
};

namespace detail {

struct budget_exhausted {};

struct objective_aborted {
    std::string message;
};

/// Counts evaluations against the budget, records every value, tracks the
/// best point, and aborts on non-finite objective values.
template <typename F>
class CountingObjective {
public:
    CountingObjective(F& f, int max_evals) : f_(f), max_evals_(max_evals) {}

    double operator()(const std::vector<double>& x) {
        if (used_ >= max_evals_) throw budget_exhausted{};
        const double v = f_(x);
        ++used_;
        values_.push_back(v);
        if (!std::isfinite(v))
            throw objective_aborted{"non-finite objective value at evaluation " +
                                    std::to_string(used_)};
        if (v < best_value_) {
            best_value_ = v;
            best_point_ = x;
        }
        return v;
    }

    int used() const { return used_; }
    int remaining() const { return max_evals_ - used_; }

    void finalize(OptimizerRun& run) {
        run.evaluations = used_;
        run.values = std::move(values_);
        run.best_value = best_value_;
        run.best_point = std::move(best_point_);
    }

private:
    F& f_;
    int max_evals_;
    int used_ = 0;
    std::vector<double> values_;
    double best_value_ = std::numeric_limits<double>::infinity();
    std::vector<double> best_point_;
};

/// Forward-difference gradient with step h_i = sqrt(machine eps) * max(|x_i|, 1).
template <typename Eval>
std::vector<double> forward_gradient(Eval& eval, const std::vector<double>& x,
                                     double fx) {
    constexpr double kSqrtEps = 1.4901161193847656e-08;  // sqrt(2^-52)
    std::vector<double> grad(x.size());
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = kSqrtEps * std::max(std::abs(x[i]), 1.0);
        probe[i] = x[i] + h;
        const double actual = probe[i] - x[i];
        grad[i] = (eval(probe) - fx) / actual;
        probe[i] = x[i];
    }
    return grad;
}

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace detail

/// Nelder-Mead simplex search with the classic coefficients: reflection 1,
/// expansion 2, contraction 0.5, shrink 0.5. The initial simplex perturbs each
/// coordinate of x0 by 5% (by 0.00025 where the coordinate is 0). Halts when
/// both the simplex diameter and the value spread drop to `tol`, or when the
/// evaluation budget is spent.
template <typename F>
OptimizerRun nelder_mead(F&& f, const std::vector<double>& x0, int max_evals,
                         double tol) {
    const int dim = static_cast<int>(x0.size());
    if (dim < 1) throw std::invalid_argument("nelder_mead: dimension must be >= 1");
    if (max_evals < dim + 2)
        throw std::invalid_argument(
            "nelder_mead: budget cannot cover the initial simplex");

    OptimizerRun run;
    detail::CountingObjective<F> eval(f, max_evals);
    try {
        std::vector<std::vector<double>> verts(static_cast<std::size_t>(dim) + 1, x0);
        for (int i = 0; i < dim; ++i) {
            auto& v = verts[static_cast<std::size_t>(i) + 1];
            const auto j = static_cast<std::size_t>(i);
            v[j] = v[j] != 0.0 ? 1.05 * v[j] : 0.00025;
        }
        std::vector<double> fv(verts.size());
        for (std::size_t i = 0; i < verts.size(); ++i) fv[i] = eval(verts[i]);

        std::vector<std::size_t> order(verts.size());
        for (;;) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

            double diameter = 0.0;
            double spread = 0.0;
            const auto& best = verts[order[0]];
            for (std::size_t i = 1; i < order.size(); ++i) {
                spread = std::max(spread, std::abs(fv[order[i]] - fv[order[0]]));
                const auto& v = verts[order[i]];
                for (std::size_t j = 0; j < v.size(); ++j)
                    diameter = std::max(diameter, std::abs(v[j] - best[j]));
            }
            if (diameter <= tol && spread <= tol) {
                run.converged_at = eval.used();
                run.termination = TerminationReason::converged;
                break;
            }

            const std::size_t worst = order.back();
            std::vector<double> centroid(static_cast<std::size_t>(dim), 0.0);
            for (std::size_t i = 0; i + 1 < order.size(); ++i)
                for (std::size_t j = 0; j < centroid.size(); ++j)
                    centroid[j] += verts[order[i]][j];
            for (auto& cj : centroid) cj /= dim;

            const auto point_along = [&](double scale) {
                std::vector<double> p(centroid.size());
                for (std::size_t j = 0; j < p.size(); ++j)
                    p[j] = centroid[j] + scale * (centroid[j] - verts[worst][j]);
                return p;
            };

            const auto reflected = point_along(1.0);
            const double fr = eval(reflected);
            bool shrink = false;
            if (fr < fv[order[0]]) {
                const auto expanded = point_along(2.0);
                const double fe = eval(expanded);
                if (fe < fr) {
                    verts[worst] = expanded;
                    fv[worst] = fe;
                } else {
                    verts[worst] = reflected;
                    fv[worst] = fr;
                }
            } else if (fr < fv[order[order.size() - 2]]) {
                verts[worst] = reflected;
                fv[worst] = fr;
            } else if (fr < fv[worst]) {
                const auto outside = point_along(0.5);
                const double fc = eval(outside);
                if (fc <= fr) {
                    verts[worst] = outside;
                    fv[worst] = fc;
                } else {
                    shrink = true;
                }
            } else {
                const auto inside = point_along(-0.5);
                const double fc = eval(inside);
                if (fc < fv[worst]) {
                    verts[worst] = inside;
                    fv[worst] = fc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (std::size_t i = 1; i < order.size(); ++i) {
                    auto& v = verts[order[i]];
                    for (std::size_t j = 0; j < v.size(); ++j)
                        v[j] = best[j] + 0.5 * (v[j] - best[j]);
                    fv[order[i]] = eval(v);
                }
            }
        }
    } catch (const detail::budget_exhausted&) {
        run.termination = TerminationReason::budget_exhausted;
    } catch (const detail::objective_aborted& a) {
        run.termination = TerminationReason::aborted;
        run.error = a.message;
    }
    eval.finalize(run);
    return run;
}

/// BFGS quasi-Newton minimization with forward-difference gradients and a
/// backtracking line search enforcing the Armijo sufficient-decrease condition
/// (c1 = 1e-4, step halving). Every function evaluation, including the
/// dimension-many gradient probes per iteration, counts toward `max_evals`.
/// Halts when the gradient infinity norm drops to `tol`.
template <typename F>
OptimizerRun quasi_newton(F&& f, const std::vector<double>& x0, int max_evals,
                          double tol) {
    const auto dim = x0.size();
    if (dim < 1) throw std::invalid_argument("quasi_newton: dimension must be >= 1");
    if (max_evals < static_cast<int>(dim) + 2)
        throw std::invalid_argument(
            "quasi_newton: budget cannot cover one gradient evaluation");

    constexpr double kArmijo = 1e-4;
    constexpr double kMinStep = 1e-12;

    OptimizerRun run;
    detail::CountingObjective<F> eval(f, max_evals);
    try {
        std::vector<double> x = x0;
        double fx = eval(x);
        std::vector<double> grad = detail::forward_gradient(eval, x, fx);

        // Inverse Hessian approximation, dense row-major.
        std::vector<double> h_inv(dim * dim, 0.0);
        const auto reset_h = [&] {
            std::fill(h_inv.begin(), h_inv.end(), 0.0);
            for (std::size_t i = 0; i < dim; ++i) h_inv[i * dim + i] = 1.0;
        };
        reset_h();

        for (;;) {
            if (detail::inf_norm(grad) <= tol) {
                run.converged_at = eval.used();
                run.termination = TerminationReason::converged;
                break;
            }

            std::vector<double> direction(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < dim; ++j)
                    s += h_inv[i * dim + j] * grad[j];
                direction[i] = -s;
            }
            double slope = 0.0;
            for (std::size_t i = 0; i < dim; ++i) slope += direction[i] * grad[i];
            if (slope >= 0.0) {
                reset_h();
                for (std::size_t i = 0; i < dim; ++i) direction[i] = -grad[i];
                slope = 0.0;
                for (std::size_t i = 0; i < dim; ++i) slope -= grad[i] * grad[i];
            }

            double step = 1.0;
            double f_next = fx;
            std::vector<double> x_next(dim);
            bool accepted = false;
            while (step >= kMinStep) {
                for (std::size_t i = 0; i < dim; ++i)
                    x_next[i] = x[i] + step * direction[i];
                f_next = eval(x_next);
                if (f_next <= fx + kArmijo * step * slope) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                run.termination = TerminationReason::stalled;
                break;
            }

            const std::vector<double> grad_next =
                detail::forward_gradient(eval, x_next, f_next);

            std::vector<double> s_vec(dim), y_vec(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                s_vec[i] = x_next[i] - x[i];
                y_vec[i] = grad_next[i] - grad[i];
            }
            double sy = 0.0, s_norm = 0.0, y_norm = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                sy += s_vec[i] * y_vec[i];
                s_norm += s_vec[i] * s_vec[i];
                y_norm += y_vec[i] * y_vec[i];
            }
            if (sy > 1e-10 * std::sqrt(s_norm * y_norm)) {
                // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
                const double rho = 1.0 / sy;
                std::vector<double> hy(dim, 0.0);
                for (std::size_t i = 0; i < dim; ++i)
                    for (std::size_t j = 0; j < dim; ++j)
                        hy[i] += h_inv[i * dim + j] * y_vec[j];
                double yhy = 0.0;
                for (std::size_t i = 0; i < dim; ++i) yhy += y_vec[i] * hy[i];
                for (std::size_t i = 0; i < dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        h_inv[i * dim + j] +=
                            -rho * (s_vec[i] * hy[j] + hy[i] * s_vec[j]) +
                            rho * rho * yhy * s_vec[i] * s_vec[j] +
                            rho * s_vec[i] * s_vec[j];
                    }
                }
            }

            x = std::move(x_next);
            fx = f_next;
            grad = grad_next;
        }
    } catch (const detail::budget_exhausted&) {
        run.termination = TerminationReason::budget_exhausted;
    } catch (const detail::objective_aborted& a) {
        run.termination = TerminationReason::aborted;
        run.error = a.message;
    }
    eval.finalize(run);
    return run;
}

/// One measured distribution and its objective value, both taken at the
/// parameters of a single circuit evaluation.
struct TraceSnapshot {
    double objective_value;
    QualityDistribution distribution;
};

/// Per-evaluation record of one optimizer run on one instance. Snapshot n
/// reflects the parameters of the n-th circuit evaluation; if the optimizer
/// halts early the final snapshot is repeated so traces align across restarts.
struct EvaluationTrace {
    std::string instance_id;
    int n_vars = 0;
    int depth = 0;
    int max_evals = 0;
    std::uint64_t restart_seed = 0;
    OptimizerKind optimizer = OptimizerKind::nelder_mead;
    ObjectiveKind objective;
    std::vector<TraceSnapshot> snapshots;
    std::optional<int> converged_at;
    std::string error;
};

/// Full variational run: draws initial phases uniformly from (0, 2pi) using
/// `restart_seed`, then lets the chosen optimizer minimize the objective of
/// the measured distribution, one circuit evaluation per objective call.
inline EvaluationTrace run_vqa(const IsingInstance& instance, int depth,
                               OptimizerKind optimizer,
                               const ObjectiveKind& objective, int max_evals,
                               std::uint64_t restart_seed,
                               std::string instance_id = {}, double tol = 1e-4) {
    if (depth < 1) throw std::invalid_argument("run_vqa: depth must be >= 1");

    const int n = instance.n_vars();
    const EnergyLevels levels = EnergyLevels::build(instance);
    const CircuitParams start = CircuitParams::random(n, depth, restart_seed);

    std::vector<TraceSnapshot> snapshots;
    snapshots.reserve(static_cast<std::size_t>(max_evals));
    auto f = [&](const std::vector<double>& x) {
        const StateVector state =
            run_circuit(instance, CircuitParams(n, depth, x));
        QualityDistribution dist = measure_distribution(state, levels);
        const double value = objective_value(dist, objective);
        snapshots.push_back({value, std::move(dist)});
        return value;
    };

    const OptimizerRun run =
        optimizer == OptimizerKind::nelder_mead
            ? nelder_mead(f, start.phases, max_evals, tol)
            : quasi_newton(f, start.phases, max_evals, tol);
    if (snapshots.empty())
        throw std::runtime_error("run_vqa: optimizer aborted before any evaluation");

    snapshots.resize(static_cast<std::size_t>(max_evals), snapshots.back());

    EvaluationTrace trace;
    trace.instance_id = instance_id.empty()
                            ? "n" + std::to_string(n) + "-s" +
                                  std::to_string(instance.seed())
                            : std::move(instance_id);
    trace.n_vars = n;
    trace.depth = depth;
    trace.max_evals = max_evals;
    trace.restart_seed = restart_seed;
    trace.optimizer = optimizer;
    trace.objective = objective;
    trace.snapshots = std::move(snapshots);
    trace.converged_at = run.converged_at;
    trace.error = run.error;
    return trace;
}

}  // namespace vqabench
