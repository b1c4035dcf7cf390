#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqabench/rng.hpp"

namespace vqabench {

/// Assignment of the N binary variables. bits[r] is z^r in {0,1}; the
/// corresponding spin is s^r = 2 z^r - 1.
struct SpinConfig {
    std::vector<std::uint8_t> bits;

    /// Config encoded by the basis index: bit r of `index` is z^r (little-endian).
    static SpinConfig from_index(std::uint64_t index, int n_vars) {
        SpinConfig c;
        c.bits.resize(static_cast<std::size_t>(n_vars));
        for (int r = 0; r < n_vars; ++r)
            c.bits[static_cast<std::size_t>(r)] =
                static_cast<std::uint8_t>((index >> r) & 1U);
        return c;
    }

    int spin(int r) const { return bits[static_cast<std::size_t>(r)] ? 1 : -1; }

    SpinConfig complement() const {
        SpinConfig c = *this;
        for (auto& b : c.bits) b ^= 1U;
        return c;
    }
};

/// Fully connected pairwise-coupling problem over N spins:
///   E(z) = sum_{r<s} J_rs s^r s^s,  s^r = 2 z^r - 1.
/// Couplings are stored for all pairs r < s in lexicographic order.
class IsingInstance {
public:
    IsingInstance(int n_vars, std::vector<int> couplings, std::uint64_t seed = 0)
        : n_vars_(n_vars), seed_(seed), couplings_(std::move(couplings)) {
        if (n_vars < 2)
            throw std::invalid_argument("IsingInstance: n_vars must be >= 2");
        if (couplings_.size() != static_cast<std::size_t>(pair_count(n_vars)))
            throw std::invalid_argument(
                "IsingInstance: expected one coupling per pair r < s");
    }

    static int pair_count(int n_vars) { return n_vars * (n_vars - 1) / 2; }

    /// Linear index of the pair (r, s), r < s, in lexicographic order.
    static int pair_index(int r, int s, int n_vars) {
        return r * n_vars - r * (r + 1) / 2 + (s - r - 1);
    }

    int n_vars() const { return n_vars_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<int>& couplings() const { return couplings_; }

    int coupling(int r, int s) const {
        return couplings_[static_cast<std::size_t>(pair_index(r, s, n_vars_))];
    }

private:
    int n_vars_;
    std::uint64_t seed_;
    std::vector<int> couplings_;
};

/// Random instance with every J_rs drawn independently and uniformly from
/// {+-1, ..., +-10}. The draw is one SplitMix64 output per pair, visited in
/// lexicographic (r, s) order, mapped as
///   k = next() mod 20;  J = k < 10 ? k + 1 : -(k - 9)
/// so the instance bytes are a pure function of (n_vars, seed).
inline IsingInstance generate_instance(int n_vars, std::uint64_t seed) {
    if (n_vars < 2)
        throw std::invalid_argument("generate_instance: n_vars must be >= 2");
    SplitMix64 rng(seed);
    std::vector<int> couplings(static_cast<std::size_t>(IsingInstance::pair_count(n_vars)));
    for (auto& j : couplings) {
        const int k = static_cast<int>(rng.next_below(20));
        j = k < 10 ? k + 1 : -(k - 9);
    }
    return IsingInstance(n_vars, std::move(couplings), seed);
}

/// Exact energy of one configuration. Integer arithmetic throughout.
inline std::int64_t energy(const IsingInstance& instance, const SpinConfig& config) {
    if (config.bits.size() != static_cast<std::size_t>(instance.n_vars()))
        throw std::invalid_argument("energy: config length != n_vars");
    const int n = instance.n_vars();
    std::int64_t e = 0;
    int p = 0;
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s)
            e += static_cast<std::int64_t>(instance.couplings()[static_cast<std::size_t>(p++)]) *
                 config.spin(r) * config.spin(s);
    return e;
}

/// Energy of every basis index, enumerated in Gray-code order with O(N)
/// single-flip updates. table[i] = E(config encoded by index i).
inline std::vector<std::int64_t> build_energy_table(const IsingInstance& instance) {
    const int n = instance.n_vars();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<std::int64_t> table(dim);

    std::vector<int> spin(static_cast<std::size_t>(n), -1);  // index 0: all z = 0
    std::int64_t e = 0;
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) e += instance.coupling(r, s);

    std::uint64_t gray = 0;
    table[0] = e;
    for (std::uint64_t i = 1; i < dim; ++i) {
        const int b = std::countr_zero(i);
        std::int64_t cross = 0;
        for (int j = 0; j < n; ++j) {
            if (j == b) continue;
            cross += static_cast<std::int64_t>(
                         instance.coupling(j < b ? j : b, j < b ? b : j)) *
                     spin[static_cast<std::size_t>(j)];
        }
        e -= 2 * spin[static_cast<std::size_t>(b)] * cross;
        spin[static_cast<std::size_t>(b)] = -spin[static_cast<std::size_t>(b)];
        gray ^= std::uint64_t{1} << b;
        table[gray] = e;
    }
    return table;
}

struct SpectrumLevel {
    std::int64_t energy;
    std::uint64_t degeneracy;
};

/// Exact level structure from brute-force enumeration: ascending energies with
/// degeneracies summing to 2^N. Degeneracies are even because E(s) = E(-s).
struct Spectrum {
    std::vector<SpectrumLevel> levels;
    std::int64_t ground_energy = 0;
    std::int64_t first_excited = 0;  // equals ground_energy if only one level
};

inline Spectrum full_spectrum(const IsingInstance& instance) {
    if (instance.n_vars() > 24)
        throw std::invalid_argument("full_spectrum: n_vars > 24 is too large to enumerate");
    const auto table = build_energy_table(instance);
    std::map<std::int64_t, std::uint64_t> counts;
    for (const auto e : table) ++counts[e];

    Spectrum spec;
    spec.levels.reserve(counts.size());
    for (const auto& [e, d] : counts) spec.levels.push_back({e, d});
    spec.ground_energy = spec.levels.front().energy;
    spec.first_excited =
        spec.levels.size() > 1 ? spec.levels[1].energy : spec.ground_energy;
    return spec;
}

}  // namespace vqabench
