#include "leakynet/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"

namespace leakynet {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_common(const ModelSpec& spec, std::uint64_t replicas, unsigned workers) {
    spec.validate();
    if (replicas < 1) {
        throw std::invalid_argument("replicas must be >= 1");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be >= 1");
    }
}

std::size_t size_of(const ModelSpec& spec) { return static_cast<std::size_t>(spec.n); }

}  // namespace

InitSpec InitSpec::parse(std::string_view text) {
    if (text == "ladder") {
        return {InitKind::ladder, std::nullopt};
    }
    if (text == "s0" || text == "s0_random") {
        return {InitKind::s0_random, std::nullopt};
    }
    constexpr std::string_view prefix = "explicit:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::vector<Potential> values;
        std::string_view rest = text.substr(prefix.size());
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            Potential v = 0;
            const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc() || end != item.data() + item.size()) {
                throw std::invalid_argument("init: bad potential '" + std::string(item) + "'");
            }
            values.push_back(v);
            rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
        }
        return {InitKind::explicit_list, PotentialList(std::move(values))};
    }
    throw std::invalid_argument("init: expected ladder, s0 or explicit:<list>, got '" + std::string(text) + "'");
}

std::string InitSpec::describe() const {
    switch (kind) {
    case InitKind::ladder:
        return "ladder";
    case InitKind::s0_random:
        return "s0";
    case InitKind::explicit_list: {
        std::string out = "explicit:";
        for (std::size_t i = 0; i < list->size(); ++i) {
            out += (i ? "," : "") + std::to_string((*list)[i]);
        }
        return out;
    }
    }
    return "unknown";
}

PotentialList InitSpec::draw(std::size_t n, RngStream& rng) const {
    switch (kind) {
    case InitKind::ladder:
        return ladder(n);
    case InitKind::s0_random:
        return sample_s0(n, rng);
    case InitKind::explicit_list:
        if (!list || list->size() != n) {
            throw std::invalid_argument("init: explicit list must have n = " + std::to_string(n) + " entries");
        }
        if (list->is_null()) {
            throw std::invalid_argument("init: the null list is a trap");
        }
        return *list;
    }
    throw std::logic_error("init: unknown kind");
}

CensoredRunError::CensoredRunError(std::uint64_t replica, std::uint64_t budget)
    : std::runtime_error("replica " + std::to_string(replica) + " exhausted its budget of " +
                         std::to_string(budget) + " jumps before absorption (censoring not allowed)"),
      replica_(replica) {}

EnsembleAggregates aggregate(std::span<const ReplicaRecord> records) {
    EnsembleAggregates a;
    a.replicas = records.size();
    std::vector<double> taus;
    for (const auto& r : records) {
        if (r.tau) {
            taus.push_back(*r.tau);
        }
    }
    a.absorbed = taus.size();
    a.censored = a.replicas - a.absorbed;
    if (!taus.empty()) {
        a.mean = mean(taus);
        for (double p : {0.1, 0.25, 0.5, c_level(), 0.75, 0.9}) {
            a.quantiles.emplace_back(p, order_statistic_quantile(taus, p));
        }
    }
    if (taus.size() >= 2) {
        a.standard_error = standard_error(taus);
        a.interval = normal_interval(*a.mean, *a.standard_error, 0.99);
        if (std::all_of(taus.begin(), taus.end(), [](double t) { return t > 0.0; })) {
            a.ks = ks_exp1(taus);
        }
    }
    return a;
}

std::vector<double> EnsembleReport::taus() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (r.tau) {
            out.push_back(*r.tau);
        }
    }
    return out;
}

EnsembleReport extinction_ensemble(const EnsembleConfig& config) {
    check_common(config.spec, config.replicas, config.workers);
    if (config.jump_budget < 1) {
        throw std::invalid_argument("jump budget must be >= 1");
    }
    EnsembleReport report;
    report.config = config;
    report.records.resize(config.replicas);
    const std::size_t n = size_of(config.spec);

    detail::run_indexed(config.replicas, config.workers, [&](std::uint64_t i) {
        RngStream rng = derive_stream(config.seed, i);
        const PotentialList u0 = config.init.draw(n, rng);
        SimulationOptions options;
        options.stop.jump_budget = config.jump_budget;
        const TrajectorySummary s = simulate(u0, config.spec, options, rng);
        report.records[i] = {i, s.tau, s.jumps, s.z_spike, s.z_leak, s.stop_reason};
        if (!s.tau && !config.allow_censoring) {
            throw CensoredRunError(i, config.jump_budget);
        }
        return true;
    });
    report.aggregates = aggregate(report.records);
    return report;
}

double c_lower_bound(std::size_t n) {
    const double m = static_cast<double>(n) - 1.0;
    return (m + std::exp(static_cast<double>(n) - 2.0)) / (m * m * m);
}

QuantileEstimate estimate_c(std::span<const double> samples, std::uint64_t seed) {
    return estimate_quantile(samples, c_level(), seed, 1000, 0.99);
}

MemorylessCheck memoryless_proxy(std::span<const double> samples, double c, double s, double t) {
    if (samples.empty()) {
        throw std::invalid_argument("memoryless_proxy: no samples");
    }
    const double r = static_cast<double>(samples.size());
    const auto tail = [&](double x) {
        return static_cast<double>(std::count_if(samples.begin(), samples.end(), [x](double v) { return v > x; })) /
               r;
    };
    MemorylessCheck m;
    m.s = s;
    m.t = t;
    m.c = c;
    m.joint = tail(c * (s + t));
    const double ps = tail(c * s);
    const double pt = tail(c * t);
    m.product = ps * pt;
    m.gap = std::abs(m.joint - m.product);
    const auto var = [r](double p) { return p * (1 - p) / r; };
    m.combined_se = std::sqrt(var(m.joint) + pt * pt * var(ps) + ps * ps * var(pt));
    return m;
}

OccupancyReport occupancy(const OccupancyConfig& config) {
    check_common(config.spec, config.replicas, config.workers);
    if (!(config.t > 0.0)) {
        throw std::invalid_argument("occupancy: t must be > 0");
    }
    OccupancyReport report;
    report.config = config;
    report.records.resize(config.replicas);
    const std::size_t n = size_of(config.spec);

    detail::run_indexed(config.replicas, config.workers, [&](std::uint64_t i) {
        RngStream rng = derive_stream(config.seed, i);
        const PotentialList u0 = config.init.draw(n, rng);
        SimulationOptions options;
        options.stop.horizon = config.t;
        const TrajectorySummary s = simulate(u0, config.spec, options, rng);
        const bool survived = s.stop_reason == StopReason::horizon;
        report.records[i] = {i, survived, survived && classify(s.final_state).in_w, s.jumps};
        return true;
    });
    for (const auto& r : report.records) {
        report.survivors += r.survived ? 1 : 0;
        report.in_w += r.in_w ? 1 : 0;
    }
    if (report.survivors == 0) {
        throw std::domain_error("occupancy: no replica survived to t, the conditional probability is undefined");
    }
    report.estimate = static_cast<double>(report.in_w) / static_cast<double>(report.survivors);
    report.interval = binomial_interval(report.in_w, report.survivors, 0.99);
    return report;
}

double t_prime(std::size_t n) {
    const double x = static_cast<double>(n);
    return std::pow(x, -0.25) + std::pow(x, -2.0) + std::exp(-(x - std::pow(x, 0.25))) +
           std::exp(-(x - std::sqrt(x)));
}

double t_auxiliary(std::size_t n) { return std::sqrt(static_cast<double>(n)) + t_prime(n); }

LadderReport ladder_hitting(const LadderConfig& config) {
    check_common(config.spec, config.replicas, config.workers);
    const std::size_t n = size_of(config.spec);
    LadderReport report;
    report.config = config;
    report.threshold = config.auxiliary ? t_auxiliary(n) : t_prime(n);
    report.horizon = config.horizon.value_or(2.0 * report.threshold);
    report.records.resize(config.replicas);

    detail::run_indexed(config.replicas, config.workers, [&](std::uint64_t i) {
        RngStream rng = derive_stream(config.seed, i);
        const PotentialList u0 = config.init.draw(n, rng);
        SimulationOptions options;
        options.auxiliary = config.auxiliary;
        options.stop.horizon = report.horizon;
        options.stop.target = SetKind::l;
        options.record = {SetKind::l};
        const TrajectorySummary s = simulate(u0, config.spec, options, rng);
        report.records[i] = {i, s.hit_time(SetKind::l), s.jumps, s.stop_reason};
        return true;
    });
    for (const auto& r : report.records) {
        if (r.hit_time && *r.hit_time <= report.threshold) {
            ++report.hits_by_threshold;
        }
    }
    report.fraction = static_cast<double>(report.hits_by_threshold) / static_cast<double>(config.replicas);
    report.interval = binomial_interval(report.hits_by_threshold, config.replicas, 0.99);
    return report;
}

PotentialList draw_w_list(std::size_t n, RngStream& rng) {
    if (n < 2) {
        throw std::invalid_argument("draw_w_list: n must be >= 2");
    }
    const std::size_t f = floor_sqrt(n);
    const std::size_t kept = n - f + 1;  // values 0, ..., n - f
    std::vector<Potential> values(n);
    std::iota(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(kept), Potential{0});

    std::vector<Potential> pool(2 * f);
    std::iota(pool.begin(), pool.end(), static_cast<Potential>(n - f + 1));
    for (std::size_t i = 0; i + kept < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
        values[kept + i] = pool[i];
    }
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(values[i], values[static_cast<std::size_t>(rng.below(i + 1))]);
    }
    return PotentialList(std::move(values));
}

CouplingReport coupling_stats(const CouplingConfig& config) {
    check_common(config.spec, config.replicas, config.workers);
    const std::size_t n = size_of(config.spec);
    CouplingReport report;
    report.config = config;
    report.outcomes.resize(config.replicas);

    detail::run_indexed(config.replicas, config.workers, [&](std::uint64_t i) {
        RngStream rng = derive_stream(config.seed, i);
        const PotentialList w = draw_w_list(n, rng);
        const PotentialList w2 = draw_w_list(n, rng);
        CouplingStop stop;
        stop.jump_budget = config.jump_budget;
        report.outcomes[i] = simulate_coupled(w, w2, config.spec, config.convention, stop, rng);
        return true;
    });

    const std::uint64_t window = e1_window(n);
    std::vector<double> t_nc;
    for (const auto& o : report.outcomes) {
        if (o.n_c && (!o.n_dagger || *o.n_c < *o.n_dagger)) {
            ++report.nc_before_dagger;
        }
        if (o.t_nc) {
            t_nc.push_back(*o.t_nc);
        }
        if (o.e1_occurred) {
            ++report.e1_count;
            if (!o.n_c || *o.n_c > window) {
                ++report.e1_violations;
            }
            if (o.ladder_at_window) {
                ++report.e1_ladder_at_window;
            }
        }
    }
    report.p_nc_before_dagger = static_cast<double>(report.nc_before_dagger) / static_cast<double>(config.replicas);
    report.interval = binomial_interval(report.nc_before_dagger, config.replicas, 0.99);
    if (!t_nc.empty()) {
        report.median_t_nc = order_statistic_quantile(t_nc, 0.5);
        for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            report.t_nc_quantiles.emplace_back(p, order_statistic_quantile(t_nc, p));
        }
    }
    return report;
}

MarginalCheckReport marginal_check(const MarginalCheckConfig& config) {
    check_common(config.spec, config.samples, config.workers);
    MarginalCheckReport report;
    report.coupled.resize(config.samples);
    report.standalone.resize(config.samples);

    detail::run_indexed(2 * config.samples, config.workers, [&](std::uint64_t i) {
        RngStream rng = derive_stream(config.seed, i);
        if (i < config.samples) {
            CouplingStop stop;
            stop.until_resolved = false;
            stop.u_target = SetKind::l;
            const CouplingOutcome o = simulate_coupled(config.u0, config.v0, config.spec, config.convention, stop, rng);
            report.coupled[i] = o.u_hit_time.value_or(inf);
        } else {
            SimulationOptions options;
            options.stop.target = SetKind::l;
            options.record = {SetKind::l};
            const TrajectorySummary s = simulate(config.u0, config.spec, options, rng);
            report.standalone[i - config.samples] = s.hit_time(SetKind::l).value_or(inf);
        }
        return true;
    });
    report.distance = ks_two_sample(report.coupled, report.standalone);
    report.critical = ks_critical_two_sample(config.samples, config.samples, 0.01);
    report.pass = report.distance < report.critical;
    return report;
}

AuxOccupancyReport aux_occupancy(const AuxOccupancyConfig& config) {
    check_common(config.spec, config.replicas, config.workers);
    if (!(config.burn_in > 0.0 && config.run_time > config.burn_in)) {
        throw std::invalid_argument("aux_occupancy: need run_time > burn_in > 0");
    }
    const std::size_t n = size_of(config.spec);
    AuxOccupancyReport report;
    report.config = config;
    report.records.resize(config.replicas);

    detail::run_indexed(config.replicas, config.workers, [&](std::uint64_t i) {
        RngStream rng = derive_stream(config.seed, i);
        Process process(config.init.draw(n, rng), config.spec, true);
        std::vector<Potential> scratch(n);
        const auto in_w = [&] {
            std::copy(process.state().begin(), process.state().end(), scratch.begin());
            std::sort(scratch.begin(), scratch.end());
            return classify_sorted(scratch).in_w;
        };
        AuxOccupancyRecord rec;
        rec.replica = i;
        double occupied = 0.0;
        bool current = in_w();
        for (;;) {
            const Event e = process.sample(rng);
            const double start = process.time();
            const double end = std::min(start + e.holding_time, config.run_time);
            if (current) {
                occupied += std::max(0.0, end - std::max(start, config.burn_in));
            }
            if (start + e.holding_time >= config.run_time) {
                break;
            }
            process.apply(e);
            ++rec.jumps;
            if (process.absorbed()) {
                ++rec.null_visits;
                break;
            }
            current = in_w();
        }
        rec.fraction = occupied / (config.run_time - config.burn_in);
        report.records[i] = rec;
        return true;
    });

    std::vector<double> fractions;
    for (const auto& r : report.records) {
        fractions.push_back(r.fraction);
        report.null_visits += r.null_visits;
    }
    report.mean = mean(fractions);
    report.standard_error = fractions.size() >= 2 ? standard_error(fractions) : 0.0;
    report.interval = normal_interval(report.mean, report.standard_error, 0.99);
    return report;
}

}  // namespace leakynet
