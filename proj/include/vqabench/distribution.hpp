#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vqabench {

struct QualityEntry {
    double energy;
    double probability;
};

/// Discrete distribution over solution qualities: strictly ascending energies
/// e_a with probabilities p_a > 0 summing to 1 (up to small numeric drift).
struct QualityDistribution {
    std::vector<QualityEntry> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }

    double min_energy() const { return entries.front().energy; }
    double max_energy() const { return entries.back().energy; }

    /// Probability of exactly this energy, 0 if absent.
    double probability_of(double energy) const {
        for (const auto& e : entries)
            if (e.energy == energy) return e.probability;
        return 0.0;
    }

    double sum_probability() const {
        double s = 0.0;
        for (const auto& e : entries) s += e.probability;
        return s;
    }

    /// Throws unless entries are strictly ascending with positive probabilities
    /// summing to 1 within `tol`.
    void validate(double tol = 1e-9) const {
        if (entries.empty())
            throw std::invalid_argument("QualityDistribution: empty");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (!(entries[i].probability > 0.0))
                throw std::invalid_argument("QualityDistribution: probability <= 0");
            if (i > 0 && !(entries[i - 1].energy < entries[i].energy))
                throw std::invalid_argument("QualityDistribution: energies not ascending");
        }
        if (std::abs(sum_probability() - 1.0) > tol)
            throw std::invalid_argument("QualityDistribution: probabilities do not sum to 1");
    }
};

/// True when the two distributions assign the same probability (within tol)
/// to every energy present in either.
inline bool distributions_close(const QualityDistribution& a,
                                const QualityDistribution& b, double tol) {
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j == b.entries.size() ||
            (i < a.entries.size() && a.entries[i].energy < b.entries[j].energy)) {
            if (std::abs(a.entries[i].probability) > tol) return false;
            ++i;
        } else if (i == a.entries.size() || b.entries[j].energy < a.entries[i].energy) {
            if (std::abs(b.entries[j].probability) > tol) return false;
            ++j;
        } else {
            if (std::abs(a.entries[i].probability - b.entries[j].probability) > tol)
                return false;
            ++i;
            ++j;
        }
    }
    return true;
}

}  // namespace vqabench
