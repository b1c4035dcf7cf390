#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqabench/distribution.hpp"
#include "vqabench/ising.hpp"
#include "vqabench/rng.hpp"

namespace vqabench {

/// Largest statevector the dense simulator will allocate (16M amplitudes).
inline constexpr int kMaxQubits = 20;

/// Probability mass below which an energy group is dropped from a measured
/// distribution, and the drift beyond which the result is renormalized.
inline constexpr double kProbabilityFloor = 1e-15;
inline constexpr double kNormalizationDrift = 1e-12;

/// Phases of the depth-D ansatz, one block per layer laid out as
/// [gamma_0..gamma_{N-1} | chi_0..chi_{N-1} | zeta over pairs (r,s), r<s].
/// Layer d applies, right to left,
///   exp(-i sum_r gamma_r sigma^y_r) exp(-i sum_r chi_r sigma^x_r)
///   exp(-i sum_{r<s} zeta_rs J_rs sigma^z_r sigma^z_s).
/// Values are unconstrained reals; the circuit is 2pi-periodic in each phase.
struct CircuitParams {
    int n_vars = 0;
    int depth = 0;
    std::vector<double> phases;

    CircuitParams() = default;
    CircuitParams(int n_vars_, int depth_, std::vector<double> phases_)
        : n_vars(n_vars_), depth(depth_), phases(std::move(phases_)) {
        if (n_vars < 2) throw std::invalid_argument("CircuitParams: n_vars must be >= 2");
        if (depth < 1) throw std::invalid_argument("CircuitParams: depth must be >= 1");
        if (phases.size() != static_cast<std::size_t>(param_count(n_vars, depth)))
            throw std::invalid_argument("CircuitParams: phase vector has wrong length");
    }

    static int params_per_layer(int n_vars) {
        return 2 * n_vars + IsingInstance::pair_count(n_vars);
    }
    static int param_count(int n_vars, int depth) {
        return depth * params_per_layer(n_vars);
    }

    std::span<const double> gamma(int d) const {
        return {phases.data() + layer_offset(d), static_cast<std::size_t>(n_vars)};
    }
    std::span<const double> chi(int d) const {
        return {phases.data() + layer_offset(d) + n_vars,
                static_cast<std::size_t>(n_vars)};
    }
    std::span<const double> zeta(int d) const {
        return {phases.data() + layer_offset(d) + 2 * n_vars,
                static_cast<std::size_t>(IsingInstance::pair_count(n_vars))};
    }

    /// Initial phases drawn uniformly from the open interval (0, 2pi).
    static CircuitParams random(int n_vars, int depth, std::uint64_t seed) {
        SplitMix64 rng(seed);
        std::vector<double> phases(
            static_cast<std::size_t>(param_count(n_vars, depth)));
        for (auto& p : phases)
            p = rng.next_open_unit() * 2.0 * std::numbers::pi;
        return CircuitParams(n_vars, depth, std::move(phases));
    }

private:
    std::size_t layer_offset(int d) const {
        return static_cast<std::size_t>(d) *
               static_cast<std::size_t>(params_per_layer(n_vars));
    }
};

/// Dense state over the 2^N computational basis states; index i encodes the
/// bitstring z_i little-endian (bit r of i is z^r).
struct StateVector {
    int n_vars = 0;
    std::vector<std::complex<double>> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return std::sqrt(s);
    }
};

/// Uniform superposition (|0> + |1>)/sqrt(2) on every qubit.
inline StateVector initial_state(int n_vars) {
    if (n_vars < 2 || n_vars > kMaxQubits)
        throw std::invalid_argument("initial_state: n_vars out of range [2, 20]");
    StateVector state;
    state.n_vars = n_vars;
    const std::size_t dim = std::size_t{1} << n_vars;
    state.amplitudes.assign(dim, std::complex<double>(
                                     std::pow(2.0, -0.5 * n_vars), 0.0));
    return state;
}

namespace detail {

/// Diagonal coupling layer: amplitude i picks up exp(-i sum_{r<s} zeta_rs J_rs
/// s^r s^s) with s^r = +-1 read off the bits of i.
inline void apply_zz_layer(StateVector& state, const IsingInstance& instance,
                           std::span<const double> zeta) {
    const int n = state.n_vars;
    const std::size_t dim = state.dim();
    std::vector<double> angle(dim, 0.0);
    int p = 0;
    for (int r = 0; r < n; ++r) {
        for (int s = r + 1; s < n; ++s, ++p) {
            const double w =
                zeta[static_cast<std::size_t>(p)] *
                static_cast<double>(instance.couplings()[static_cast<std::size_t>(p)]);
            if (w == 0.0) continue;
            for (std::size_t i = 0; i < dim; ++i) {
                const bool anti = ((i >> r) ^ (i >> s)) & 1U;
                angle[i] += anti ? -w : w;
            }
        }
    }
    for (std::size_t i = 0; i < dim; ++i)
        state.amplitudes[i] *= std::complex<double>(std::cos(angle[i]),
                                                    -std::sin(angle[i]));
}

/// exp(-i theta sigma^x) on one qubit: [[cos, -i sin], [-i sin, cos]].
inline void apply_x_rotation(StateVector& state, int qubit, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::complex<double> mis(0.0, -s);
    const std::size_t step = std::size_t{1} << qubit;
    const std::size_t dim = state.dim();
    for (std::size_t base = 0; base < dim; base += 2 * step) {
        for (std::size_t i = base; i < base + step; ++i) {
            const auto a0 = state.amplitudes[i];
            const auto a1 = state.amplitudes[i + step];
            state.amplitudes[i] = c * a0 + mis * a1;
            state.amplitudes[i + step] = mis * a0 + c * a1;
        }
    }
}

/// exp(-i theta sigma^y) on one qubit: the real rotation [[cos, -sin], [sin, cos]].
inline void apply_y_rotation(StateVector& state, int qubit, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::size_t step = std::size_t{1} << qubit;
    const std::size_t dim = state.dim();
    for (std::size_t base = 0; base < dim; base += 2 * step) {
        for (std::size_t i = base; i < base + step; ++i) {
            const auto a0 = state.amplitudes[i];
            const auto a1 = state.amplitudes[i + step];
            state.amplitudes[i] = c * a0 - s * a1;
            state.amplitudes[i + step] = s * a0 + c * a1;
        }
    }
}

inline void apply_layer_inplace(StateVector& state, const IsingInstance& instance,
                                std::span<const double> gamma,
                                std::span<const double> chi,
                                std::span<const double> zeta) {
    const int n = state.n_vars;
    apply_zz_layer(state, instance, zeta);
    for (int r = 0; r < n; ++r) apply_x_rotation(state, r, chi[static_cast<std::size_t>(r)]);
    for (int r = 0; r < n; ++r) apply_y_rotation(state, r, gamma[static_cast<std::size_t>(r)]);
}

}  // namespace detail

/// One ansatz layer: the ZZ phase layer, then the X rotations, then the Y
/// rotations (rightmost factor of the layer unitary acts first).
inline StateVector apply_layer(const StateVector& state, const IsingInstance& instance,
                               std::span<const double> gamma,
                               std::span<const double> chi,
                               std::span<const double> zeta) {
    if (state.n_vars != instance.n_vars())
        throw std::invalid_argument("apply_layer: state and instance size mismatch");
    if (state.dim() != (std::size_t{1} << state.n_vars))
        throw std::invalid_argument("apply_layer: state dimension is not 2^N");
    const auto n = static_cast<std::size_t>(state.n_vars);
    if (gamma.size() != n || chi.size() != n ||
        zeta.size() != static_cast<std::size_t>(IsingInstance::pair_count(state.n_vars)))
        throw std::invalid_argument("apply_layer: phase vector length mismatch");
    StateVector out = state;
    detail::apply_layer_inplace(out, instance, gamma, chi, zeta);
    return out;
}

/// Full circuit on the uniform initial state. One call is one circuit
/// evaluation for cost accounting.
inline StateVector run_circuit(const IsingInstance& instance,
                               const CircuitParams& params) {
    if (params.n_vars != instance.n_vars())
        throw std::invalid_argument("run_circuit: params built for a different N");
    StateVector state = initial_state(instance.n_vars());
    for (int d = 0; d < params.depth; ++d)
        detail::apply_layer_inplace(state, instance, params.gamma(d), params.chi(d),
                                    params.zeta(d));
    return state;
}

/// Sorted unique energies of an instance plus the level index of every basis
/// state. Precomputing this makes repeated measurements O(2^N).
struct EnergyLevels {
    std::vector<std::int64_t> energies;  // ascending
    std::vector<std::int32_t> level_of;  // basis index -> position in `energies`

    static EnergyLevels build(const IsingInstance& instance) {
        const auto table = build_energy_table(instance);
        std::vector<std::int64_t> sorted(table.begin(), table.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

        EnergyLevels levels;
        levels.energies = std::move(sorted);
        levels.level_of.resize(table.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            const auto it = std::lower_bound(levels.energies.begin(),
                                             levels.energies.end(), table[i]);
            levels.level_of[i] =
                static_cast<std::int32_t>(it - levels.energies.begin());
        }
        return levels;
    }
};

/// Measurement statistics of `state` grouped by exact energy:
/// P(e_a) = sum over basis states with energy e_a of |amplitude|^2.
/// Groups below kProbabilityFloor are dropped; the result is rescaled to sum
/// to 1 only when the drift exceeds kNormalizationDrift.
inline QualityDistribution measure_distribution(const StateVector& state,
                                                const EnergyLevels& levels) {
    if (state.dim() != levels.level_of.size())
        throw std::invalid_argument("measure_distribution: state dimension mismatch");
    std::vector<double> mass(levels.energies.size(), 0.0);
    for (std::size_t i = 0; i < state.dim(); ++i)
        mass[static_cast<std::size_t>(levels.level_of[i])] +=
            std::norm(state.amplitudes[i]);

    QualityDistribution dist;
    double total = 0.0;
    for (std::size_t a = 0; a < mass.size(); ++a) {
        if (mass[a] < kProbabilityFloor) continue;
        dist.entries.push_back({static_cast<double>(levels.energies[a]), mass[a]});
        total += mass[a];
    }
    if (std::abs(total - 1.0) > kNormalizationDrift && total > 0.0) {
        for (auto& entry : dist.entries) entry.probability /= total;
    }
    return dist;
}

inline QualityDistribution measure_distribution(const StateVector& state,
                                                const IsingInstance& instance) {
    if (state.dim() != (std::size_t{1} << instance.n_vars()))
        throw std::invalid_argument("measure_distribution: state dimension mismatch");
    return measure_distribution(state, EnergyLevels::build(instance));
}

}  // namespace vqabench
