#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "leakynet/event_log.hpp"
#include "leakynet/oracle.hpp"
#include "leakynet/report.hpp"

namespace leakynet::cli {

using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> known_keys = {
    "experiment", "n",   "model", "base",    "seed",     "replicas",  "init",      "horizon",
    "jump_budget", "allow_censoring", "convention", "cap", "t", "burn_in", "run_time", "auxiliary",
    "format",     "workers", "out", "log"};

template <class T>
T read_key(const Json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: key '" + key + "' has the wrong type");
    }
}

std::uint64_t read_count(const Json& j, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError("config: key '" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open output path '" + path + "' for writing");
    }
    f << text;
    if (!f.flush()) {
        throw ConfigError("cannot write output path '" + path + "'");
    }
}

}  // namespace

std::string RunConfig::effective_init() const {
    if (!init.empty()) {
        return init;
    }
    if (experiment == "occupancy" || experiment == "ladder" || experiment == "aux-occupancy") {
        return "s0";
    }
    return "ladder";
}

void RunConfig::validate() const {
    const auto known = [&](std::string_view e) {
        for (auto x : experiments) {
            if (x == e) {
                return true;
            }
        }
        return false;
    };
    if (!known(experiment)) {
        throw ConfigError("config: key 'experiment' has unknown value '" + experiment + "'");
    }
    if (n < 2) {
        throw ConfigError("config: key 'n' must be >= 2");
    }
    if (!(base > 1.0) || !std::isfinite(base)) {
        throw ConfigError("config: key 'base' must be a finite number > 1");
    }
    if (experiment != "oracle" && !seed) {
        throw ConfigError("config: key 'seed' is required (no implicit seeding)");
    }
    if (replicas < 1) {
        throw ConfigError("config: key 'replicas' must be >= 1");
    }
    if (workers < 1) {
        throw ConfigError("config: key 'workers' must be >= 1");
    }
    if (jump_budget < 1) {
        throw ConfigError("config: key 'jump_budget' must be >= 1");
    }
    if (horizon && !(*horizon >= 0.0)) {
        throw ConfigError("config: key 'horizon' must be >= 0");
    }
    if (format != "json" && format != "csv") {
        throw ConfigError("config: key 'format' must be json or csv");
    }
    try {
        const InitSpec spec = InitSpec::parse(effective_init());
        if (spec.kind == InitKind::explicit_list) {
            if (spec.list->size() != static_cast<std::size_t>(n)) {
                throw ConfigError("config: key 'init' lists " + std::to_string(spec.list->size()) +
                                  " potentials but n = " + std::to_string(n));
            }
            if (spec.list->is_null()) {
                throw ConfigError("config: key 'init' is the null list (a trap)");
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: key 'init': ") + e.what());
    }
    if (experiment == "oracle" && (n > 3 || cap < n)) {
        throw ConfigError("config: oracle needs n in {2, 3} and key 'cap' >= n");
    }
    if (experiment == "occupancy" && !(t > 0.0)) {
        throw ConfigError("config: key 't' must be > 0");
    }
    if (experiment == "aux-occupancy" && !(burn_in > 0.0 && run_time > burn_in)) {
        throw ConfigError("config: keys 'burn_in' and 'run_time' need run_time > burn_in > 0");
    }
    if (experiment == "simulate" && auxiliary && !horizon) {
        throw ConfigError("config: the auxiliary process never gets trapped; key 'horizon' is required");
    }
    if (experiment == "cn" && replicas < 100) {
        throw ConfigError("config: key 'replicas' must be >= 100 for the quantile estimate");
    }
}

RunConfig config_from_json_text(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end()) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    RunConfig c;
    if (j.contains("experiment")) c.experiment = read_key<std::string>(j, "experiment");
    if (j.contains("n")) c.n = static_cast<int>(read_count(j, "n"));
    if (j.contains("model")) {
        try {
            c.leak = parse_leak_kind(read_key<std::string>(j, "model"));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config: key 'model' must be reset or decrement");
        }
    }
    if (j.contains("base")) c.base = read_key<double>(j, "base");
    if (j.contains("seed")) c.seed = read_count(j, "seed");
    if (j.contains("replicas")) c.replicas = read_count(j, "replicas");
    if (j.contains("init")) {
        const Json& v = j.at("init");
        if (v.is_array()) {
            std::string s = "explicit:";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_number_integer()) {
                    throw ConfigError("config: key 'init' must hold integers");
                }
                s += (i ? "," : "") + std::to_string(v[i].get<std::int64_t>());
            }
            c.init = s;
        } else {
            c.init = read_key<std::string>(j, "init");
        }
    }
    if (j.contains("horizon") && !j.at("horizon").is_null()) c.horizon = read_key<double>(j, "horizon");
    if (j.contains("jump_budget")) c.jump_budget = read_count(j, "jump_budget");
    if (j.contains("allow_censoring")) c.allow_censoring = read_key<bool>(j, "allow_censoring");
    if (j.contains("convention")) {
        try {
            c.convention = parse_rate_convention(read_key<std::string>(j, "convention"));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config: key 'convention' must be paper_literal or marginal_preserving");
        }
    }
    if (j.contains("cap")) c.cap = static_cast<int>(read_count(j, "cap"));
    if (j.contains("t")) c.t = read_key<double>(j, "t");
    if (j.contains("burn_in")) c.burn_in = read_key<double>(j, "burn_in");
    if (j.contains("run_time")) c.run_time = read_key<double>(j, "run_time");
    if (j.contains("auxiliary")) c.auxiliary = read_key<bool>(j, "auxiliary");
    if (j.contains("format")) c.format = read_key<std::string>(j, "format");
    if (j.contains("workers")) c.workers = static_cast<unsigned>(read_count(j, "workers"));
    if (j.contains("out")) c.out = read_key<std::string>(j, "out");
    if (j.contains("log")) c.log = read_key<std::string>(j, "log");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("config: cannot read '" + path + "'");
    }
    std::stringstream buffer;
    buffer << f.rdbuf();
    return config_from_json_text(buffer.str());
}

std::string config_echo(const RunConfig& c) {
    Json j;
    j["experiment"] = c.experiment;
    j["n"] = c.n;
    j["model"] = std::string(to_string(c.leak));
    j["base"] = c.base;
    j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
    j["replicas"] = c.replicas;
    j["init"] = c.effective_init();
    j["horizon"] = c.horizon ? Json(*c.horizon) : Json(nullptr);
    j["jump_budget"] = c.jump_budget;
    j["allow_censoring"] = c.allow_censoring;
    j["convention"] = std::string(to_string(c.convention));
    j["cap"] = c.cap;
    j["t"] = c.t;
    j["burn_in"] = c.burn_in;
    j["run_time"] = c.run_time;
    j["auxiliary"] = c.auxiliary;
    j["format"] = c.format;
    return j.dump();
}

CheckResult check_expectation(std::string_view output_json, const std::string& expectations_path,
                              const std::string& criterion) {
    std::ifstream f(expectations_path, std::ios::binary);
    if (!f) {
        throw ConfigError("check: cannot read expectations file '" + expectations_path + "'");
    }
    const Json expectations = Json::parse(f);
    const Json& criteria = expectations.at("criteria");
    if (!criteria.contains(criterion)) {
        throw ConfigError("check: no expectation named '" + criterion + "'");
    }
    const Json& e = criteria.at(criterion);
    if (!e.contains("metric") || !e.contains("check")) {
        throw ConfigError("check: expectation '" + criterion + "' has no metric/check and is acceptance-only");
    }
    const Json output = Json::parse(output_json);
    const auto pointer = Json::json_pointer(e.at("metric").get<std::string>());
    const std::string check = e.at("check").get<std::string>();
    if (check == "is_true") {
        const bool pass = output.contains(pointer) && output.at(pointer).is_boolean() && output.at(pointer).get<bool>();
        return {pass, e.at("metric").get<std::string>() + (pass ? " is true" : " is not true")};
    }
    if (!output.contains(pointer) || !output.at(pointer).is_number()) {
        return {false, "metric " + e.at("metric").get<std::string>() + " missing from the output"};
    }
    const double x = output.at(pointer).get<double>();
    const double value = e.at("value").get<double>();
    const double tol = e.value("tolerance", 0.0);
    std::ostringstream detail;
    detail << e.at("metric").get<std::string>() << " = " << x;
    bool pass = false;
    if (check == "within_se") {
        const auto se_pointer = Json::json_pointer(e.at("se_metric").get<std::string>());
        const double se = output.at(se_pointer).get<double>();
        pass = std::abs(x - value) <= tol * se;
        detail << ", expected " << value << " within " << tol << " SE (SE " << se << ")";
    } else if (check == "at_least") {
        pass = x >= value;
        detail << ", expected >= " << value;
    } else if (check == "at_least_metric") {
        const double reference = output.at(Json::json_pointer(e.at("reference_metric").get<std::string>())).get<double>();
        pass = x >= reference;
        detail << ", expected >= " << reference;
    } else if (check == "at_most") {
        pass = x <= value;
        detail << ", expected <= " << value;
    } else {
        throw ConfigError("check: unknown check kind '" + check + "'");
    }
    return {pass, detail.str()};
}

namespace {

struct Flags {
    std::string config;
    std::optional<int> n;
    std::optional<std::string> model;
    std::optional<double> base;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> replicas;
    std::optional<std::string> init;
    std::optional<double> horizon;
    std::optional<std::uint64_t> jump_budget;
    bool allow_censoring = false;
    std::optional<std::string> convention;
    std::optional<int> cap;
    std::optional<double> t;
    std::optional<double> burn_in;
    std::optional<double> run_time;
    bool auxiliary = false;
    std::optional<std::string> format;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    std::optional<std::string> log;
    std::string check;
    std::string expectations = LEAKYNET_DEFAULT_EXPECTATIONS;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file; flags override its values");
    sub->add_option("--n", f.n, "Number of neurons");
    sub->add_option("--model", f.model, "Leak mechanism: reset or decrement");
    sub->add_option("--base", f.base, "Base of the exponential spike rate");
    sub->add_option("--seed", f.seed, "Master seed (required)");
    sub->add_option("--replicas", f.replicas, "Number of independent replicas");
    sub->add_option("--init", f.init, "ladder, s0 or explicit:0,1,2,...");
    sub->add_option("--horizon", f.horizon, "Model-time horizon");
    sub->add_option("--jump-budget", f.jump_budget, "Per-replica jump budget");
    sub->add_flag("--allow-censoring", f.allow_censoring, "Keep runs that exhaust the budget");
    sub->add_option("--convention", f.convention, "paper_literal or marginal_preserving");
    sub->add_option("--cap", f.cap, "Oracle truncation cap");
    sub->add_option("--t", f.t, "Occupancy time");
    sub->add_option("--burn-in", f.burn_in, "Auxiliary burn-in time");
    sub->add_option("--run-time", f.run_time, "Auxiliary total run time");
    sub->add_flag("--aux", f.auxiliary, "Use the auxiliary process");
    sub->add_option("--format", f.format, "json or csv");
    sub->add_option("--workers", f.workers, "Worker threads");
    sub->add_option("--out", f.out, "Output path (stdout when absent)");
    sub->add_option("--log", f.log, "Event log CSV path (simulate)");
    sub->add_option("--check", f.check, "Expectation id to verify; exit 2 on mismatch");
    sub->add_option("--expectations", f.expectations, "Expectations file");
}

RunConfig merge(const std::string& experiment, const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    c.experiment = experiment;
    if (f.n) c.n = *f.n;
    if (f.model) {
        try {
            c.leak = parse_leak_kind(*f.model);
        } catch (const std::invalid_argument&) {
            throw ConfigError("flag --model must be reset or decrement");
        }
    }
    if (f.base) c.base = *f.base;
    if (f.seed) c.seed = *f.seed;
    if (f.replicas) c.replicas = *f.replicas;
    if (f.init) c.init = *f.init;
    if (f.horizon) c.horizon = *f.horizon;
    if (f.jump_budget) c.jump_budget = *f.jump_budget;
    if (f.allow_censoring) c.allow_censoring = true;
    if (f.convention) {
        try {
            c.convention = parse_rate_convention(*f.convention);
        } catch (const std::invalid_argument&) {
            throw ConfigError("flag --convention must be paper_literal or marginal_preserving");
        }
    }
    if (f.cap) c.cap = *f.cap;
    if (f.t) c.t = *f.t;
    if (f.burn_in) c.burn_in = *f.burn_in;
    if (f.run_time) c.run_time = *f.run_time;
    if (f.auxiliary) c.auxiliary = true;
    if (f.format) c.format = *f.format;
    if (f.workers) c.workers = *f.workers;
    if (f.out) c.out = *f.out;
    if (f.log) c.log = *f.log;
    c.validate();
    return c;
}

struct Outputs {
    std::string json;
    std::string csv;  // empty when the experiment has no tabular form
};

Outputs run(const RunConfig& c) {
    Provenance prov;
    prov.config_json = config_echo(c);
    const ModelSpec spec = c.spec();
    const InitSpec init = InitSpec::parse(c.effective_init());
    const std::uint64_t seed = c.seed.value_or(0);
    Outputs o;

    if (c.experiment == "simulate") {
        RngStream rng = derive_stream(seed, 0);
        const PotentialList u0 = init.draw(static_cast<std::size_t>(c.n), rng);
        SimulationOptions options;
        options.auxiliary = c.auxiliary;
        options.stop.horizon = c.horizon;
        options.stop.jump_budget = c.jump_budget;
        options.record.assign(all_set_kinds.begin(), all_set_kinds.end());
        options.log_events = !c.log.empty();
        const TrajectorySummary s = simulate(u0, spec, options, rng);
        if (!c.log.empty()) {
            write_file(c.log, event_log_csv(s.events));
        }
        o.json = trajectory_json(s, prov);
    } else if (c.experiment == "extinction" || c.experiment == "cn") {
        EnsembleConfig e;
        e.spec = spec;
        e.init = init;
        e.replicas = c.replicas;
        e.seed = seed;
        e.jump_budget = c.jump_budget;
        e.allow_censoring = c.allow_censoring;
        e.workers = c.workers;
        const EnsembleReport r = extinction_ensemble(e);
        if (c.experiment == "cn") {
            o.json = cn_json(r, summarize_cn(r, seed), prov);
        } else {
            o.json = ensemble_json(r, prov);
        }
        o.csv = ensemble_csv(r);
    } else if (c.experiment == "occupancy") {
        OccupancyConfig e;
        e.spec = spec;
        e.init = init;
        e.t = c.t;
        e.replicas = c.replicas;
        e.seed = seed;
        e.workers = c.workers;
        o.json = occupancy_json(occupancy(e), prov);
    } else if (c.experiment == "ladder") {
        LadderConfig e;
        e.spec = spec;
        e.init = init;
        e.replicas = c.replicas;
        e.seed = seed;
        e.workers = c.workers;
        e.auxiliary = c.auxiliary;
        e.horizon = c.horizon;
        o.json = ladder_json(ladder_hitting(e), prov);
    } else if (c.experiment == "coupling") {
        CouplingConfig e;
        e.spec = spec;
        e.convention = c.convention;
        e.replicas = c.replicas;
        e.seed = seed;
        e.workers = c.workers;
        e.jump_budget = c.jump_budget;
        const CouplingReport r = coupling_stats(e);
        o.json = coupling_json(r, prov);
        o.csv = coupling_csv(r);
    } else if (c.experiment == "aux-occupancy") {
        AuxOccupancyConfig e;
        e.spec = spec;
        e.init = init;
        e.burn_in = c.burn_in;
        e.run_time = c.run_time;
        e.replicas = c.replicas;
        e.seed = seed;
        e.workers = c.workers;
        o.json = aux_occupancy_json(aux_occupancy(e), prov);
    } else if (c.experiment == "oracle") {
        o.json = oracle_json(oracle_report(spec, c.cap), prov);
    }
    return o;
}

}  // namespace

int parse_and_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact simulation, oracle and statistics for leaky spiking networks", "leakynet"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);
    Flags flags;
    std::vector<CLI::App*> subs;
    for (auto name : experiments) {
        CLI::App* sub = app.add_subcommand(std::string(name), "Run the " + std::string(name) + " experiment");
        add_flags(sub, flags);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << library_version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 1;
    }

    std::string experiment;
    for (auto* sub : subs) {
        if (sub->parsed()) {
            experiment = sub->get_name();
        }
    }

    try {
        const RunConfig config = merge(experiment, flags);
        const Outputs o = run(config);
        const bool csv = config.format == "csv" && !o.csv.empty();
        if (config.format == "csv" && o.csv.empty()) {
            throw ConfigError("config: experiment '" + experiment + "' has no csv form; use format json");
        }
        if (config.out.empty()) {
            out << (csv ? o.csv : o.json);
        } else {
            write_file(config.out, csv ? o.csv : o.json);
            if (csv) {
                Provenance prov;
                prov.config_json = config_echo(config);
                write_file(config.out + ".meta.json", provenance_json(prov));
            }
        }
        if (!flags.check.empty()) {
            const CheckResult r = check_expectation(o.json, flags.expectations, flags.check);
            err << (r.pass ? "check passed: " : "check failed: ") << r.detail << '\n';
            return r.pass ? 0 : 2;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return parse_and_run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace leakynet::cli
