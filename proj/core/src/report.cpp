#include "leakynet/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "leakynet/format.hpp"

#ifndef LEAKYNET_VERSION_STRING
#define LEAKYNET_VERSION_STRING "0.0.0"
#endif

namespace leakynet {

using Json = nlohmann::ordered_json;

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T>
Json optional_json(const std::optional<T>& x) {
    if (!x) {
        return nullptr;
    }
    if constexpr (std::is_floating_point_v<T>) {
        return number(*x);
    } else {
        return *x;
    }
}

Json interval_json(const Interval& i) { return Json::array({number(i.lo), number(i.hi)}); }

Json pairs_json(const std::vector<std::pair<double, double>>& pairs) {
    Json out = Json::array();
    for (const auto& [p, v] : pairs) {
        out.push_back(Json::array({p, number(v)}));
    }
    return out;
}

Json spec_json(const ModelSpec& spec) {
    return Json{{"n", spec.n}, {"leak_kind", std::string(to_string(spec.leak))}, {"base", spec.base}};
}

Json envelope(std::string_view kind, const Provenance& provenance) {
    Json out;
    out["schema_version"] = report_schema_version;
    out["kind"] = kind;
    out["tool_version"] = provenance.tool_version;
    out["seed_rule"] = provenance.seed_rule;
    out["config"] = Json::parse(provenance.config_json);
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json aggregates_json(const EnsembleAggregates& a) {
    Json out;
    out["replicas"] = a.replicas;
    out["absorbed"] = a.absorbed;
    out["censored"] = a.censored;
    out["mean"] = optional_json(a.mean);
    out["standard_error"] = optional_json(a.standard_error);
    out["interval_99"] = a.interval ? interval_json(*a.interval) : Json(nullptr);
    out["quantiles"] = pairs_json(a.quantiles);
    out["ks_exp1"] = optional_json(a.ks);
    return out;
}

Json records_json(const std::vector<ReplicaRecord>& records) {
    Json out = Json::array();
    for (const auto& r : records) {
        out.push_back(Json{{"replica", r.replica},
                           {"tau", optional_json(r.tau)},
                           {"jumps", r.jumps},
                           {"z_spike", r.z_spike},
                           {"z_leak", r.z_leak},
                           {"stop_reason", std::string(to_string(r.stop_reason))}});
    }
    return out;
}

StopReason parse_stop_reason(const std::string& s) {
    for (StopReason r : {StopReason::absorbed, StopReason::horizon, StopReason::budget, StopReason::target}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    throw std::invalid_argument("unknown stop reason '" + s + "'");
}

template <class T>
std::optional<T> read_optional(const Json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<T>();
}

}  // namespace

std::string_view library_version() { return LEAKYNET_VERSION_STRING; }

std::string provenance_json(const Provenance& provenance) { return dump(envelope("provenance", provenance)); }

std::string ensemble_json(const EnsembleReport& report, const Provenance& provenance) {
    Json out = envelope("extinction", provenance);
    out["model"] = spec_json(report.config.spec);
    out["init"] = report.config.init.describe();
    out["seed"] = report.config.seed;
    out["jump_budget"] = report.config.jump_budget;
    out["aggregates"] = aggregates_json(report.aggregates);
    out["records"] = records_json(report.records);
    return dump(out);
}

std::string ensemble_csv(const EnsembleReport& report) {
    std::ostringstream out;
    out << "replica,tau,jumps,z_spike,z_leak,stop_reason\n";
    for (const auto& r : report.records) {
        out << r.replica << ',' << format_real(r.tau) << ',' << r.jumps << ',' << r.z_spike << ',' << r.z_leak << ','
            << to_string(r.stop_reason) << '\n';
    }
    return out.str();
}

CnSummary summarize_cn(const EnsembleReport& report, std::uint64_t bootstrap_seed) {
    const std::vector<double> taus = report.taus();
    CnSummary s;
    s.c = estimate_c(taus, bootstrap_seed);
    s.lower_bound = c_lower_bound(static_cast<std::size_t>(report.config.spec.n));
    s.mean_over_c = mean(taus) / s.c.value;
    for (const auto& [a, b] : {std::pair{0.5, 0.5}, std::pair{1.0, 1.0}}) {
        s.memoryless.push_back(memoryless_proxy(taus, s.c.value, a, b));
    }
    return s;
}

std::string cn_json(const EnsembleReport& report, const CnSummary& summary, const Provenance& provenance) {
    Json out = envelope("cn", provenance);
    out["model"] = spec_json(report.config.spec);
    out["init"] = report.config.init.describe();
    out["seed"] = report.config.seed;
    out["c_estimate"] = summary.c.value;
    out["c_interval_99"] = interval_json(summary.c.interval);
    out["c_lower_99"] = summary.c.lower_bound;
    out["c_bound"] = summary.lower_bound;
    out["mean_over_c"] = summary.mean_over_c;
    Json mem = Json::array();
    for (const auto& m : summary.memoryless) {
        mem.push_back(Json{{"s", m.s},
                           {"t", m.t},
                           {"joint", m.joint},
                           {"product", m.product},
                           {"gap", m.gap},
                           {"combined_se", m.combined_se}});
    }
    out["memoryless"] = mem;
    out["aggregates"] = aggregates_json(report.aggregates);
    out["records"] = records_json(report.records);
    return dump(out);
}

std::string oracle_json(const OracleReport& report, const Provenance& provenance) {
    Json out = envelope("oracle", provenance);
    out["n"] = report.spec.n;
    out["leak_kind"] = std::string(to_string(report.spec.leak));
    out["base"] = report.spec.base;
    out["cap"] = report.cap;
    Json means = Json::object();
    for (const auto& [label, value] : report.means) {
        means[label] = value;
    }
    out["means"] = means;
    out["checks"] = Json{{"cap_converged", report.cap_converged},
                         {"cap_relative_change", report.cap_relative_change},
                         {"closed_form_agree", optional_json(report.closed_form_agree)}};
    return dump(out);
}

std::string occupancy_json(const OccupancyReport& report, const Provenance& provenance) {
    Json out = envelope("occupancy", provenance);
    out["model"] = spec_json(report.config.spec);
    out["init"] = report.config.init.describe();
    out["seed"] = report.config.seed;
    out["t"] = report.config.t;
    out["replicas"] = report.config.replicas;
    out["survivors"] = report.survivors;
    out["in_w"] = report.in_w;
    out["estimate"] = report.estimate;
    out["interval_99"] = interval_json(report.interval);
    Json recs = Json::array();
    for (const auto& r : report.records) {
        recs.push_back(Json{{"replica", r.replica}, {"survived", r.survived}, {"in_w", r.in_w}, {"jumps", r.jumps}});
    }
    out["records"] = recs;
    return dump(out);
}

std::string ladder_json(const LadderReport& report, const Provenance& provenance) {
    Json out = envelope("ladder", provenance);
    out["model"] = spec_json(report.config.spec);
    out["init"] = report.config.init.describe();
    out["seed"] = report.config.seed;
    out["auxiliary"] = report.config.auxiliary;
    out["threshold"] = report.threshold;
    out["horizon"] = report.horizon;
    out["replicas"] = report.config.replicas;
    out["hits_by_threshold"] = report.hits_by_threshold;
    out["fraction"] = report.fraction;
    out["interval_99"] = interval_json(report.interval);
    Json recs = Json::array();
    for (const auto& r : report.records) {
        recs.push_back(Json{{"replica", r.replica},
                            {"hit_time", optional_json(r.hit_time)},
                            {"jumps", r.jumps},
                            {"stop_reason", std::string(to_string(r.stop_reason))}});
    }
    out["records"] = recs;
    return dump(out);
}

std::string coupling_json(const CouplingReport& report, const Provenance& provenance) {
    Json out = envelope("coupling", provenance);
    out["model"] = spec_json(report.config.spec);
    out["convention"] = std::string(to_string(report.config.convention));
    out["seed"] = report.config.seed;
    out["replicas"] = report.config.replicas;
    out["nc_before_dagger"] = report.nc_before_dagger;
    out["p_nc_before_dagger"] = report.p_nc_before_dagger;
    out["interval_99"] = interval_json(report.interval);
    out["median_t_nc"] = optional_json(report.median_t_nc);
    out["t_nc_quantiles"] = pairs_json(report.t_nc_quantiles);
    out["e1_count"] = report.e1_count;
    out["e1_violations"] = report.e1_violations;
    out["e1_ladder_at_window"] = report.e1_ladder_at_window;
    Json recs = Json::array();
    for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
        const auto& o = report.outcomes[i];
        recs.push_back(Json{{"replica", i},
                            {"n_c", optional_json(o.n_c)},
                            {"n_dagger", optional_json(o.n_dagger)},
                            {"t_nc", optional_json(o.t_nc)},
                            {"e1", o.e1_occurred},
                            {"jumps", o.jumps},
                            {"stop_reason", std::string(to_string(o.stop_reason))}});
    }
    out["records"] = recs;
    return dump(out);
}

std::string coupling_csv(const CouplingReport& report) {
    std::ostringstream out;
    write_coupling_csv(out, report.outcomes);
    return out.str();
}

std::string aux_occupancy_json(const AuxOccupancyReport& report, const Provenance& provenance) {
    Json out = envelope("aux-occupancy", provenance);
    out["model"] = spec_json(report.config.spec);
    out["init"] = report.config.init.describe();
    out["seed"] = report.config.seed;
    out["burn_in"] = report.config.burn_in;
    out["run_time"] = report.config.run_time;
    out["replicas"] = report.config.replicas;
    out["mean"] = report.mean;
    out["standard_error"] = report.standard_error;
    out["interval_99"] = interval_json(report.interval);
    out["null_visits"] = report.null_visits;
    Json recs = Json::array();
    for (const auto& r : report.records) {
        recs.push_back(Json{{"replica", r.replica}, {"fraction", r.fraction}, {"jumps", r.jumps}});
    }
    out["records"] = recs;
    return dump(out);
}

std::string trajectory_json(const TrajectorySummary& s, const Provenance& provenance) {
    Json out = envelope("simulate", provenance);
    out["stop_reason"] = std::string(to_string(s.stop_reason));
    out["tau"] = optional_json(s.tau);
    out["time"] = s.time;
    out["jumps"] = s.jumps;
    out["z_spike"] = s.z_spike;
    out["z_leak"] = s.z_leak;
    Json hits = Json::object();
    for (SetKind k : all_set_kinds) {
        if (s.hit_time(k)) {
            hits[std::string(to_string(k))] = *s.hit_time(k);
        }
    }
    out["hit_times"] = hits;
    out["final_state"] = s.final_state.values();
    return dump(out);
}

std::vector<ReplicaRecord> records_from_json(std::string_view text) {
    const Json j = Json::parse(text);
    std::vector<ReplicaRecord> out;
    for (const auto& r : j.at("records")) {
        ReplicaRecord rec;
        rec.replica = r.at("replica").get<std::uint64_t>();
        rec.tau = read_optional<double>(r.at("tau"));
        rec.jumps = r.at("jumps").get<std::uint64_t>();
        rec.z_spike = r.at("z_spike").get<std::uint64_t>();
        rec.z_leak = r.at("z_leak").get<std::uint64_t>();
        rec.stop_reason = parse_stop_reason(r.at("stop_reason").get<std::string>());
        out.push_back(rec);
    }
    return out;
}

EnsembleAggregates aggregates_from_json(std::string_view text) {
    const Json j = Json::parse(text).at("aggregates");
    EnsembleAggregates a;
    a.replicas = j.at("replicas").get<std::uint64_t>();
    a.absorbed = j.at("absorbed").get<std::uint64_t>();
    a.censored = j.at("censored").get<std::uint64_t>();
    a.mean = read_optional<double>(j.at("mean"));
    a.standard_error = read_optional<double>(j.at("standard_error"));
    if (!j.at("interval_99").is_null()) {
        a.interval = Interval{j["interval_99"][0].get<double>(), j["interval_99"][1].get<double>()};
    }
    for (const auto& q : j.at("quantiles")) {
        a.quantiles.emplace_back(q[0].get<double>(), q[1].get<double>());
    }
    a.ks = read_optional<double>(j.at("ks_exp1"));
    return a;
}

bool aggregates_reproducible(std::string_view text) {
    const std::vector<ReplicaRecord> records = records_from_json(text);
    return aggregate(records) == aggregates_from_json(text);
}

}  // namespace leakynet
