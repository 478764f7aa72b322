#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "leakynet/model.hpp"
#include "leakynet/potential_list.hpp"

namespace leakynet {

/// Spike of neuron a: a resets to 0, every other neuron gains one unit.
/// Throws std::out_of_range for a bad index and std::invalid_argument when
/// u[a] == 0 (a silent neuron has spike rate 0, so this is a caller bug).
PotentialList apply_spike(const PotentialList& u, std::size_t a);

/// Leak of neuron a under the given mechanism. A no-op when u[a] == 0.
PotentialList apply_leak(const PotentialList& u, std::size_t a, LeakKind kind);

/// Neuron indices sorted by ascending potential, ties broken by index.
/// order[0] always holds a zero-potential neuron; order.back() the top one.
struct RankOrder {
    std::vector<std::size_t> order;

    std::size_t lowest() const { return order.front(); }
    std::size_t highest() const { return order.back(); }
};

RankOrder rank_order(const PotentialList& u);
RankOrder rank_order(std::span<const Potential> u);

/// Spike weights carried relative to the largest potential so that the total
/// rate never overflows: weight(b) = base^max_potential * shifted[b].
struct SpikeWeights {
    Potential max_potential = 0;
    double shifted_sum = 0.0;
    std::vector<double> shifted;

    /// base^max_potential * shifted_sum; +inf when that overflows a double.
    double total(double base) const;
    double log_total(double base) const;
    /// Exact selection probability of neuron b.
    double probability(std::size_t b) const { return shifted_sum > 0 ? shifted[b] / shifted_sum : 0.0; }
};

SpikeWeights spike_weights(const PotentialList& u, double base);

/// Number of leaks that change the state, which is also the total effective
/// leak rate: every positive neuron leaks at rate 1 under both mechanisms.
std::size_t effective_leak_count(const PotentialList& u);

/// The ladder (0, 1, ..., n-1).
PotentialList ladder(std::size_t n);

/// Spike of the highest-ranked neuron. Throws std::invalid_argument on the
/// null list.
PotentialList spike_top(const PotentialList& u);

/// spike_top applied count times; with count = n - 1 the result is a ladder
/// for every non-null start.
PotentialList fold_top_spikes(PotentialList u, std::size_t count);

/// Cached powers base^-k used by the hot loops of the simulators.
class PowerTable {
public:
    explicit PowerTable(double base, std::size_t size = 256);

    double base() const { return base_; }
    double log_base() const { return log_base_; }

    /// base^-k for k >= 0.
    double inverse_power(Potential k) const {
        return static_cast<std::size_t>(k) < inverse_.size() ? inverse_[static_cast<std::size_t>(k)]
                                                             : std::exp(-static_cast<double>(k) * log_base_);
    }
    /// base^k for k >= 0; +inf past the double range.
    double power(Potential k) const {
        return static_cast<std::size_t>(k) < direct_.size() ? direct_[static_cast<std::size_t>(k)]
                                                            : std::exp(static_cast<double>(k) * log_base_);
    }

    std::size_t table_size() const { return inverse_.size(); }
    const double* inverse_table() const { return inverse_.data(); }

private:
    double base_;
    double log_base_;
    std::vector<double> inverse_;
    std::vector<double> direct_;
};

}  // namespace leakynet
