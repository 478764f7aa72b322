#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "leakynet/model.hpp"
#include "leakynet/potential_list.hpp"
#include "leakynet/rng.hpp"
#include "leakynet/sets.hpp"
#include "leakynet/transitions.hpp"

namespace leakynet {

enum class EventKind { spike, leak };
std::string_view to_string(EventKind kind);

/// One jump of the process: the waiting time before it and what happens.
struct Event {
    double holding_time = 0.0;
    EventKind kind = EventKind::spike;
    std::size_t neuron = 0;
};

enum class StopReason { absorbed, horizon, budget, target };
std::string_view to_string(StopReason reason);

/// When a trajectory ends. Absorption in the null list always ends a run of
/// the original process; the auxiliary process never absorbs, so it needs a
/// horizon or a jump budget.
struct StopCondition {
    std::optional<double> horizon;
    std::optional<std::uint64_t> jump_budget;
    std::optional<SetKind> target;

    /// Throws std::invalid_argument when the run could not terminate.
    void validate(bool auxiliary) const;
};

struct EventRecord {
    std::uint64_t index = 0;  // 1-based jump number
    double time = 0.0;
    std::size_t neuron = 0;
    EventKind kind = EventKind::spike;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct TrajectorySummary {
    StopReason stop_reason = StopReason::absorbed;
    std::optional<double> tau;  // present iff absorbed
    double time = 0.0;          // model time at the stop
    std::uint64_t jumps = 0;
    std::uint64_t z_spike = 0;
    std::uint64_t z_leak = 0;
    std::array<std::optional<double>, all_set_kinds.size()> hit_times{};
    PotentialList final_state = PotentialList::null(2);
    std::vector<EventRecord> events;

    std::optional<double> hit_time(SetKind kind) const {
        return hit_times[static_cast<std::size_t>(kind)];
    }
    friend bool operator==(const TrajectorySummary&, const TrajectorySummary&) = default;
};

struct SimulationOptions {
    StopCondition stop;
    bool auxiliary = false;
    std::vector<SetKind> record;  // sets whose first-entry time is tracked
    bool log_events = false;
};

/// Exact jump-by-jump evolution of one trajectory (direct method).
///
/// Rates are recomputed from scratch on every jump in max-shifted form, so
/// potentials of any size are handled without overflow.
class Process {
public:
    Process(const PotentialList& initial, const ModelSpec& spec, bool auxiliary = false);

    std::span<const Potential> state() const { return state_; }
    PotentialList snapshot() const { return PotentialList(state_); }
    double time() const { return time_; }
    bool absorbed() const;
    const ModelSpec& spec() const { return spec_; }
    bool auxiliary() const { return auxiliary_; }

    /// Samples the next event from the current state without applying it.
    /// Throws std::logic_error in the trap.
    Event sample(RngStream& rng);

    /// Advances time by the holding time and applies the event's map.
    void apply(const Event& event);

    Event step(RngStream& rng) {
        Event e = sample(rng);
        apply(e);
        return e;
    }

private:
    ModelSpec spec_;
    bool auxiliary_;
    PowerTable powers_;
    std::vector<Potential> state_;
    std::vector<double> weights_;
    double time_ = 0.0;
};

/// Samples holding time and event at u. Throws std::invalid_argument when u
/// is the null list.
Event next_event(const PotentialList& u, const ModelSpec& spec, bool auxiliary, RngStream& rng);

TrajectorySummary simulate(const PotentialList& initial, const ModelSpec& spec,
                           const SimulationOptions& options, RngStream& rng);

/// Draws k uniformly from {floor(sqrt n), ..., n-1}, picks k distinct neurons
/// uniformly and gives each a potential uniform on {1, ..., n}; the rest are 0.
PotentialList sample_s0(std::size_t n, RngStream& rng);

}  // namespace leakynet
