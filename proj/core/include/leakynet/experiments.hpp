#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leakynet/coupling.hpp"
#include "leakynet/engine.hpp"
#include "leakynet/stats.hpp"

namespace leakynet {

inline constexpr std::uint64_t default_jump_budget = 100'000'000;

enum class InitKind { ladder, s0_random, explicit_list };

/// Initial state of every replica.
struct InitSpec {
    InitKind kind = InitKind::ladder;
    std::optional<PotentialList> list;  // explicit_list only

    /// Parses "ladder", "s0" or "explicit:0,1,2,7". Throws std::invalid_argument.
    static InitSpec parse(std::string_view text);
    std::string describe() const;

    /// The start of one replica; s0 draws from the replica's own stream.
    PotentialList draw(std::size_t n, RngStream& rng) const;
};

/// Thrown when a replica exhausts its jump budget and censoring is not allowed.
class CensoredRunError : public std::runtime_error {
public:
    CensoredRunError(std::uint64_t replica, std::uint64_t budget);
    std::uint64_t replica() const { return replica_; }

private:
    std::uint64_t replica_;
};

struct ReplicaRecord {
    std::uint64_t replica = 0;
    std::optional<double> tau;
    std::uint64_t jumps = 0;
    std::uint64_t z_spike = 0;
    std::uint64_t z_leak = 0;
    StopReason stop_reason = StopReason::absorbed;

    friend bool operator==(const ReplicaRecord&, const ReplicaRecord&) = default;
};

struct EnsembleAggregates {
    std::uint64_t replicas = 0;
    std::uint64_t absorbed = 0;
    std::uint64_t censored = 0;
    std::optional<double> mean;
    std::optional<double> standard_error;
    std::optional<Interval> interval;  // normal approximation, level 0.99
    std::vector<std::pair<double, double>> quantiles;
    std::optional<double> ks;           // tau / sample mean against Exp(1)

    friend bool operator==(const EnsembleAggregates&, const EnsembleAggregates&) = default;
};

/// Pure function of the records: the stored aggregates of a report can be
/// recomputed from its per-replica data.
EnsembleAggregates aggregate(std::span<const ReplicaRecord> records);

struct EnsembleConfig {
    ModelSpec spec;
    InitSpec init;
    std::uint64_t replicas = 1;
    std::uint64_t seed = 0;
    std::uint64_t jump_budget = default_jump_budget;
    bool allow_censoring = false;
    unsigned workers = 1;
};

struct EnsembleReport {
    EnsembleConfig config;
    std::vector<ReplicaRecord> records;
    EnsembleAggregates aggregates;

    std::vector<double> taus() const;
};

/// Independent extinction runs, replica i on stream (seed, i). Unless
/// censoring is allowed, the first replica to exhaust its budget stops the
/// ensemble and CensoredRunError is thrown.
EnsembleReport extinction_ensemble(const EnsembleConfig& config);

/// (N - 1 + e^(N-2)) / (N - 1)^3.
double c_lower_bound(std::size_t n);

/// Empirical (1 - e^-1)-quantile of the trapping times with a 0.99 bootstrap
/// interval (1000 resamples).
QuantileEstimate estimate_c(std::span<const double> samples, std::uint64_t seed);

struct MemorylessCheck {
    double s = 0.0;
    double t = 0.0;
    double c = 0.0;
    double joint = 0.0;    // P(tau > c (s + t))
    double product = 0.0;  // P(tau > c s) P(tau > c t)
    double gap = 0.0;
    double combined_se = 0.0;
};

/// |P(tau > c(s+t)) - P(tau > cs) P(tau > ct)| with the standard error of the
/// difference from the binomial variances of the three estimates.
MemorylessCheck memoryless_proxy(std::span<const double> samples, double c, double s, double t);

struct OccupancyConfig {
    ModelSpec spec;
    InitSpec init{InitKind::s0_random, std::nullopt};
    double t = 1.0;
    std::uint64_t replicas = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct OccupancyRecord {
    std::uint64_t replica = 0;
    bool survived = false;
    bool in_w = false;
    std::uint64_t jumps = 0;
};

struct OccupancyReport {
    OccupancyConfig config;
    std::vector<OccupancyRecord> records;
    std::uint64_t survivors = 0;
    std::uint64_t in_w = 0;
    double estimate = 0.0;
    Interval interval;  // Wilson, level 0.99
};

/// P(state at t in W | tau > t) by filtering survivors. Throws
/// std::domain_error when no replica survives.
OccupancyReport occupancy(const OccupancyConfig& config);

/// N^(-1/4) + N^(-2) + e^-(N - N^(1/4)) + e^-(N - N^(1/2)).
double t_prime(std::size_t n);
/// N^(1/2) + N^(-1/4) + N^(-2) + e^-(N - N^(1/4)) + e^-(N - N^(1/2)).
double t_auxiliary(std::size_t n);

struct LadderConfig {
    ModelSpec spec;
    InitSpec init{InitKind::s0_random, std::nullopt};
    std::uint64_t replicas = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool auxiliary = false;
    std::optional<double> horizon;  // default 2 t'_N (2 t_aux for the auxiliary process)
};

struct LadderRecord {
    std::uint64_t replica = 0;
    std::optional<double> hit_time;
    std::uint64_t jumps = 0;
    StopReason stop_reason = StopReason::target;
};

struct LadderReport {
    LadderConfig config;
    double threshold = 0.0;  // t'_N, or t_aux for the auxiliary process
    double horizon = 0.0;
    std::vector<LadderRecord> records;
    std::uint64_t hits_by_threshold = 0;
    double fraction = 0.0;
    Interval interval;
};

/// First entry into the ladder set per replica, censored at the horizon.
LadderReport ladder_hitting(const LadderConfig& config);

/// A list in W: values 0, ..., N - floor(sqrt N) from a ladder, the other
/// floor(sqrt N) - 1 neurons at distinct values drawn from
/// (N - floor(sqrt N), N + floor(sqrt N)], labels shuffled.
PotentialList draw_w_list(std::size_t n, RngStream& rng);

struct CouplingConfig {
    ModelSpec spec;
    RateConvention convention = RateConvention::marginal_preserving;
    std::uint64_t replicas = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::uint64_t jump_budget = default_jump_budget;
};

struct CouplingReport {
    CouplingConfig config;
    std::vector<CouplingOutcome> outcomes;
    std::uint64_t nc_before_dagger = 0;
    double p_nc_before_dagger = 0.0;
    Interval interval;
    std::optional<double> median_t_nc;
    std::vector<std::pair<double, double>> t_nc_quantiles;
    std::uint64_t e1_count = 0;
    std::uint64_t e1_violations = 0;
    std::uint64_t e1_ladder_at_window = 0;
};

/// Coupled runs from fresh pairs (draw_w_list twice per replica).
CouplingReport coupling_stats(const CouplingConfig& config);

struct MarginalCheckConfig {
    ModelSpec spec;
    RateConvention convention = RateConvention::marginal_preserving;
    PotentialList u0 = PotentialList::null(2);
    PotentialList v0 = PotentialList::null(2);
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct MarginalCheckReport {
    std::vector<double> coupled;     // ladder-hit times of the u-component (+inf if trapped first)
    std::vector<double> standalone;  // same from u0 alone
    double distance = 0.0;
    double critical = 0.0;  // two-sample, alpha = 0.01
    bool pass = false;
};

/// Coupled sample i uses stream (seed, i), standalone sample i stream
/// (seed, samples + i).
MarginalCheckReport marginal_check(const MarginalCheckConfig& config);

struct AuxOccupancyConfig {
    ModelSpec spec;
    InitSpec init{InitKind::s0_random, std::nullopt};
    double burn_in = 1.0;
    double run_time = 10.0;  // total horizon; the average covers [burn_in, run_time]
    std::uint64_t replicas = 10;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct AuxOccupancyRecord {
    std::uint64_t replica = 0;
    double fraction = 0.0;
    std::uint64_t jumps = 0;
    std::uint64_t null_visits = 0;
};

struct AuxOccupancyReport {
    AuxOccupancyConfig config;
    std::vector<AuxOccupancyRecord> records;
    double mean = 0.0;
    double standard_error = 0.0;
    Interval interval;
    std::uint64_t null_visits = 0;
};

/// Fraction of model time the auxiliary process spends in W after burn-in.
AuxOccupancyReport aux_occupancy(const AuxOccupancyConfig& config);

}  // namespace leakynet
