#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "leakynet/experiments.hpp"
#include "leakynet/oracle.hpp"

namespace leakynet {

inline constexpr int report_schema_version = 1;

std::string_view library_version();

/// Embedded verbatim in every output: the run configuration (a JSON object
/// text), the tool version and the per-replica seed rule.
struct Provenance {
    std::string config_json = "{}";
    std::string tool_version{library_version()};
    std::string seed_rule = seed_derivation_rule;
};

/// JSON text of the provenance block alone, used for CSV sidecars.
std::string provenance_json(const Provenance& provenance);

std::string ensemble_json(const EnsembleReport& report, const Provenance& provenance);
/// replica,tau,jumps,z_spike,z_leak,stop_reason
std::string ensemble_csv(const EnsembleReport& report);

struct CnSummary {
    QuantileEstimate c;
    double lower_bound = 0.0;  // (N - 1 + e^(N-2)) / (N - 1)^3
    double mean_over_c = 0.0;
    std::vector<MemorylessCheck> memoryless;
};

CnSummary summarize_cn(const EnsembleReport& report, std::uint64_t bootstrap_seed);
std::string cn_json(const EnsembleReport& report, const CnSummary& summary, const Provenance& provenance);

std::string oracle_json(const OracleReport& report, const Provenance& provenance);
std::string occupancy_json(const OccupancyReport& report, const Provenance& provenance);
std::string ladder_json(const LadderReport& report, const Provenance& provenance);
std::string coupling_json(const CouplingReport& report, const Provenance& provenance);
std::string coupling_csv(const CouplingReport& report);
std::string aux_occupancy_json(const AuxOccupancyReport& report, const Provenance& provenance);
std::string trajectory_json(const TrajectorySummary& summary, const Provenance& provenance);

/// Per-replica records and stored aggregates read back from ensemble_json
/// output.
std::vector<ReplicaRecord> records_from_json(std::string_view json);
EnsembleAggregates aggregates_from_json(std::string_view json);

/// True when recomputing the aggregates from the stored records reproduces
/// the stored aggregates exactly.
bool aggregates_reproducible(std::string_view ensemble_json_text);

}  // namespace leakynet
