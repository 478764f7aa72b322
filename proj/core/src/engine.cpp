#include "leakynet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace leakynet {

std::string_view to_string(EventKind kind) { return kind == EventKind::spike ? "spike" : "leak"; }

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::absorbed:
        return "absorbed";
    case StopReason::horizon:
        return "horizon";
    case StopReason::budget:
        return "budget";
    case StopReason::target:
        return "target";
    }
    return "unknown";
}

void StopCondition::validate(bool auxiliary) const {
    if (horizon && !(*horizon >= 0.0)) {
        throw std::invalid_argument("stop: horizon must be >= 0");
    }
    if (auxiliary && !horizon && !jump_budget) {
        throw std::invalid_argument(
            "stop: the auxiliary process never absorbs; set a horizon or a jump budget");
    }
}

Process::Process(const PotentialList& initial, const ModelSpec& spec, bool auxiliary)
    : spec_(spec),
      auxiliary_(auxiliary),
      powers_(spec.base),
      state_(initial.values().begin(), initial.values().end()),
      weights_(initial.size(), 0.0) {
    spec_.validate();
    if (initial.size() != static_cast<std::size_t>(spec.n)) {
        throw std::invalid_argument("initial list has " + std::to_string(initial.size()) +
                                    " neurons but the model has " + std::to_string(spec.n));
    }
}

bool Process::absorbed() const {
    return std::all_of(state_.begin(), state_.end(), [](Potential v) { return v == 0; });
}

Event Process::sample(RngStream& rng) {
    const std::size_t n = state_.size();
    const Potential* u = state_.data();
    Potential top = 0;
    std::size_t positives = 0;
    std::size_t last_positive = 0;
    for (std::size_t b = 0; b < n; ++b) {
        if (u[b] > 0) {
            ++positives;
            last_positive = b;
            top = std::max(top, u[b]);
        }
    }
    if (positives == 0) {
        throw std::logic_error("the null list is a trap: no events");
    }

    double* w = weights_.data();
    double spike_sum = 0.0;
    if (static_cast<std::size_t>(top) < powers_.table_size()) {
        const double* inv = powers_.inverse_table();
        for (std::size_t b = 0; b < n; ++b) {
            w[b] = u[b] > 0 ? inv[top - u[b]] : 0.0;
            spike_sum += w[b];
        }
    } else {
        for (std::size_t b = 0; b < n; ++b) {
            w[b] = u[b] > 0 ? powers_.inverse_power(top - u[b]) : 0.0;
            spike_sum += w[b];
        }
    }

    // In auxiliary mode the leak that would empty the list is removed.
    std::size_t forbidden = n;
    if (auxiliary_ && positives == 1 && (spec_.leak == LeakKind::reset || u[last_positive] == 1)) {
        forbidden = last_positive;
    }
    const std::size_t leak_count = positives - (forbidden < n ? 1 : 0);
    const double leak_unit = powers_.inverse_power(top);
    const double leak_sum = static_cast<double>(leak_count) * leak_unit;
    const double shifted_total = spike_sum + leak_sum;

    Event event;
    const double e = rng.exponential();
    const double scale = powers_.power(top);
    if (std::isfinite(scale)) {
        event.holding_time = e / (scale * shifted_total);
    } else {
        event.holding_time =
            std::exp(std::log(e) - static_cast<double>(top) * powers_.log_base() - std::log(shifted_total));
    }

    double x = rng.uniform() * shifted_total;
    if (x < leak_sum) {
        event.kind = EventKind::leak;
        auto k = static_cast<std::size_t>(x / leak_unit);
        k = std::min(k, leak_count - 1);
        for (std::size_t b = 0; b < n; ++b) {
            if (u[b] > 0 && b != forbidden) {
                if (k == 0) {
                    event.neuron = b;
                    break;
                }
                --k;
            }
        }
        return event;
    }

    x -= leak_sum;
    event.kind = EventKind::spike;
    event.neuron = last_positive;
    for (std::size_t b = 0; b < n; ++b) {
        if (x < w[b]) {
            event.neuron = b;
            break;
        }
        x -= w[b];
    }
    return event;
}

void Process::apply(const Event& event) {
    time_ += event.holding_time;
    Potential& target = state_[event.neuron];
    if (event.kind == EventKind::spike) {
        for (auto& v : state_) {
            ++v;
        }
        target = 0;
    } else if (target > 0) {
        target = spec_.leak == LeakKind::reset ? 0 : target - 1;
    }
}

Event next_event(const PotentialList& u, const ModelSpec& spec, bool auxiliary, RngStream& rng) {
    if (u.is_null()) {
        throw std::invalid_argument("next_event: the null list has no events");
    }
    Process process(u, spec, auxiliary);
    return process.sample(rng);
}

namespace {

class HitTracker {
public:
    HitTracker(const std::vector<SetKind>& kinds, std::size_t n) : kinds_(kinds), scratch_(n) {}

    bool active() const { return pending_ > 0 || watch_target_; }

    void set_target(std::optional<SetKind> target) {
        target_ = target;
        watch_target_ = target.has_value();
    }

    void reset_pending(const TrajectorySummary& summary) {
        pending_ = 0;
        for (SetKind k : kinds_) {
            if (!summary.hit_time(k)) {
                ++pending_;
            }
        }
    }

    /// Records first hits; returns true when the target set is entered.
    bool observe(std::span<const Potential> state, double time, TrajectorySummary& summary) {
        if (!active()) {
            return false;
        }
        std::copy(state.begin(), state.end(), scratch_.begin());
        std::sort(scratch_.begin(), scratch_.end());
        const SetFlags flags = classify_sorted(scratch_);
        for (SetKind k : kinds_) {
            auto& slot = summary.hit_times[static_cast<std::size_t>(k)];
            if (!slot && flags.contains(k)) {
                slot = time;
                --pending_;
            }
        }
        return watch_target_ && flags.contains(*target_);
    }

private:
    std::vector<SetKind> kinds_;
    std::vector<Potential> scratch_;
    std::size_t pending_ = 0;
    std::optional<SetKind> target_;
    bool watch_target_ = false;
};

}  // namespace

TrajectorySummary simulate(const PotentialList& initial, const ModelSpec& spec,
                           const SimulationOptions& options, RngStream& rng) {
    options.stop.validate(options.auxiliary);
    if (initial.is_null()) {
        throw std::invalid_argument("simulate: initial list must not be the null list");
    }
    Process process(initial, spec, options.auxiliary);

    std::vector<SetKind> kinds = options.record;
    std::sort(kinds.begin(), kinds.end());
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

    TrajectorySummary summary;
    HitTracker tracker(kinds, initial.size());
    tracker.set_target(options.stop.target);
    tracker.reset_pending(summary);

    auto finish = [&](StopReason reason) {
        summary.stop_reason = reason;
        summary.time = process.time();
        summary.final_state = process.snapshot();
        if (reason == StopReason::absorbed) {
            summary.tau = process.time();
        }
        return summary;
    };

    if (tracker.observe(process.state(), 0.0, summary)) {
        return finish(StopReason::target);
    }

    const auto& stop = options.stop;
    for (;;) {
        if (!options.auxiliary && process.absorbed()) {
            return finish(StopReason::absorbed);
        }
        if (stop.jump_budget && summary.jumps >= *stop.jump_budget) {
            return finish(StopReason::budget);
        }
        const Event event = process.sample(rng);
        if (stop.horizon && process.time() + event.holding_time > *stop.horizon) {
            summary.stop_reason = StopReason::horizon;
            summary.time = *stop.horizon;
            summary.final_state = process.snapshot();
            return summary;
        }
        process.apply(event);
        ++summary.jumps;
        if (event.kind == EventKind::spike) {
            ++summary.z_spike;
        } else {
            ++summary.z_leak;
        }
        if (options.log_events) {
            summary.events.push_back({summary.jumps, process.time(), event.neuron, event.kind});
        }
        if (tracker.observe(process.state(), process.time(), summary)) {
            return finish(StopReason::target);
        }
    }
}

PotentialList sample_s0(std::size_t n, RngStream& rng) {
    if (n < 2) {
        throw std::invalid_argument("sample_s0: n must be >= 2");
    }
    const std::size_t low = floor_sqrt(n);
    const std::size_t k = low + static_cast<std::size_t>(rng.below(n - low));  // in [low, n-1]

    std::vector<std::size_t> neurons(n);
    std::iota(neurons.begin(), neurons.end(), std::size_t{0});
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(neurons[i], neurons[j]);
    }
    std::vector<Potential> values(n, 0);
    for (std::size_t i = 0; i < k; ++i) {
        values[neurons[i]] = 1 + static_cast<Potential>(rng.below(n));
    }
    return PotentialList(std::move(values));
}

}  // namespace leakynet
