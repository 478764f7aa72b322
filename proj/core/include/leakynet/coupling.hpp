#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leakynet/engine.hpp"

namespace leakynet {

/// Rate attached to the solo spike of the leading coordinate at a rank.
///
///  - paper_literal: base^|u_j - v_j|
///  - marginal_preserving: base^max - base^min * 1{min > 0}, so that solo plus
///    joint rate equals the leader's own spike rate and each component is,
///    on its own, a copy of the original process.
enum class RateConvention { paper_literal, marginal_preserving };

std::string_view to_string(RateConvention convention);
RateConvention parse_rate_convention(std::string_view text);

/// Two lists of the same size evolved with rank-matched clocks.
struct CoupledState {
    PotentialList u;
    PotentialList v;

    CoupledState(PotentialList first, PotentialList second);
};

enum class CoupledEventKind { joint_spike, solo_spike, joint_leak };
std::string_view to_string(CoupledEventKind kind);

/// One transition of the pair. rank is 0-based (0 = lowest potential).
struct CoupledEvent {
    CoupledEventKind kind = CoupledEventKind::joint_leak;
    std::size_t rank = 0;
    double rate = 0.0;
};

/// Positive-rate, state-changing events of the pair, grouped by rank.
/// Throws std::invalid_argument when either component is the null list.
std::vector<CoupledEvent> coupled_rates(const CoupledState& x, const ModelSpec& spec,
                                        RateConvention convention);

/// Applies a coupled event to the pair.
CoupledState apply_coupled(const CoupledState& x, CoupledEventKind kind, std::size_t rank,
                           LeakKind leak);

/// True when the two lists hold the same multiset of potentials.
bool is_coalesced(const CoupledState& x);
bool is_coalesced(std::span<const Potential> u, std::span<const Potential> v);

struct CouplingStop {
    /// Stop once n_c is known and the first E_1 window is over. n_dagger is
    /// then absent when no leak happened before the stop, so n_c < n_dagger.
    bool until_resolved = true;
    std::optional<double> horizon;
    std::optional<std::uint64_t> jump_budget;
    /// Stop when the u-component enters this set (its first-entry time is
    /// recorded in CouplingOutcome::u_hit_time) or gets trapped.
    std::optional<SetKind> u_target;
};

struct CouplingOutcome {
    std::optional<std::uint64_t> n_c;
    std::optional<std::uint64_t> n_dagger;
    std::optional<double> t_nc;
    bool e1_occurred = false;
    /// Both components in the ladder set right after the E_1 window.
    bool ladder_at_window = false;
    std::uint64_t jumps = 0;
    StopReason stop_reason = StopReason::absorbed;
    double time = 0.0;
    std::optional<double> u_hit_time;
    std::optional<double> u_tau;
    std::optional<double> v_tau;

    friend bool operator==(const CouplingOutcome&, const CouplingOutcome&) = default;
};

/// Length 2 * ceil(sqrt n) of the E_1 window.
std::uint64_t e1_window(std::size_t n);

/// Evolves the pair jump by jump. When both starts lie in the partial ladder
/// set, a run with E_1 and n_c > 2 ceil(sqrt n) throws std::logic_error.
CouplingOutcome simulate_coupled(const PotentialList& u0, const PotentialList& v0, const ModelSpec& spec,
                                 RateConvention convention, const CouplingStop& stop, RngStream& rng);

inline constexpr const char* coupling_csv_header = "replica,n_c,n_dagger,t_nc,e1,jumps,stop_reason";

void write_coupling_csv(std::ostream& out, std::span<const CouplingOutcome> outcomes);

}  // namespace leakynet
