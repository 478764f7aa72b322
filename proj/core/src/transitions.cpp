#include "leakynet/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace leakynet {

namespace {

void check_index(const PotentialList& u, std::size_t a) {
    if (a >= u.size()) {
        throw std::out_of_range("neuron index " + std::to_string(a) + " out of range for " +
                                std::to_string(u.size()) + " neurons");
    }
}

}  // namespace

PotentialList apply_spike(const PotentialList& u, std::size_t a) {
    check_index(u, a);
    if (u[a] == 0) {
        throw std::invalid_argument("spike of neuron " + std::to_string(a) +
                                    " with zero potential (spike rate is 0)");
    }
    std::vector<Potential> next(u.values().begin(), u.values().end());
    for (auto& v : next) {
        ++v;
    }
    next[a] = 0;
    return PotentialList(std::move(next));
}

PotentialList apply_leak(const PotentialList& u, std::size_t a, LeakKind kind) {
    check_index(u, a);
    std::vector<Potential> next(u.values().begin(), u.values().end());
    if (next[a] > 0) {
        next[a] = kind == LeakKind::reset ? 0 : next[a] - 1;
    }
    return PotentialList(std::move(next));
}

RankOrder rank_order(std::span<const Potential> u) {
    RankOrder rank;
    rank.order.resize(u.size());
    std::iota(rank.order.begin(), rank.order.end(), std::size_t{0});
    std::stable_sort(rank.order.begin(), rank.order.end(),
                     [&](std::size_t x, std::size_t y) { return u[x] < u[y]; });
    return rank;
}

RankOrder rank_order(const PotentialList& u) { return rank_order(u.values()); }

double SpikeWeights::total(double base) const {
    if (shifted_sum == 0.0) {
        return 0.0;
    }
    return std::pow(base, static_cast<double>(max_potential)) * shifted_sum;
}

double SpikeWeights::log_total(double base) const {
    if (shifted_sum == 0.0) {
        return -INFINITY;
    }
    return static_cast<double>(max_potential) * std::log(base) + std::log(shifted_sum);
}

SpikeWeights spike_weights(const PotentialList& u, double base) {
    SpikeWeights w;
    w.max_potential = u.max();
    w.shifted.assign(u.size(), 0.0);
    const double log_base = std::log(base);
    for (std::size_t b = 0; b < u.size(); ++b) {
        if (u[b] > 0) {
            w.shifted[b] = std::exp(-static_cast<double>(w.max_potential - u[b]) * log_base);
            w.shifted_sum += w.shifted[b];
        }
    }
    return w;
}

std::size_t effective_leak_count(const PotentialList& u) { return u.positive_count(); }

PotentialList ladder(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("ladder needs n >= 2");
    }
    std::vector<Potential> values(n);
    std::iota(values.begin(), values.end(), Potential{0});
    return PotentialList(std::move(values));
}

PotentialList spike_top(const PotentialList& u) {
    if (u.is_null()) {
        throw std::invalid_argument("spike_top: the null list has no spiking neuron");
    }
    return apply_spike(u, rank_order(u).highest());
}

PotentialList fold_top_spikes(PotentialList u, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        u = spike_top(u);
    }
    return u;
}

PowerTable::PowerTable(double base, std::size_t size)
    : base_(base), log_base_(std::log(base)), inverse_(size), direct_(size) {
    for (std::size_t k = 0; k < size; ++k) {
        inverse_[k] = std::exp(-static_cast<double>(k) * log_base_);
        direct_[k] = std::exp(static_cast<double>(k) * log_base_);
    }
}

}  // namespace leakynet
