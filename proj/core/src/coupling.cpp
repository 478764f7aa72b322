#include "leakynet/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "leakynet/format.hpp"

namespace leakynet {

std::string_view to_string(RateConvention convention) {
    return convention == RateConvention::paper_literal ? "paper_literal" : "marginal_preserving";
}

RateConvention parse_rate_convention(std::string_view text) {
    if (text == "paper_literal") {
        return RateConvention::paper_literal;
    }
    if (text == "marginal_preserving") {
        return RateConvention::marginal_preserving;
    }
    throw std::invalid_argument("unknown rate convention '" + std::string(text) +
                                "' (expected paper_literal or marginal_preserving)");
}

std::string_view to_string(CoupledEventKind kind) {
    switch (kind) {
    case CoupledEventKind::joint_spike:
        return "joint_spike";
    case CoupledEventKind::solo_spike:
        return "solo_spike";
    case CoupledEventKind::joint_leak:
        return "joint_leak";
    }
    return "unknown";
}

CoupledState::CoupledState(PotentialList first, PotentialList second)
    : u(std::move(first)), v(std::move(second)) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("coupled lists must have the same size");
    }
}

bool is_coalesced(std::span<const Potential> u, std::span<const Potential> v) {
    if (u.size() != v.size()) {
        return false;
    }
    std::vector<Potential> a(u.begin(), u.end());
    std::vector<Potential> b(v.begin(), v.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

bool is_coalesced(const CoupledState& x) { return is_coalesced(x.u.values(), x.v.values()); }

std::uint64_t e1_window(std::size_t n) { return 2 * ceil_sqrt(n); }

namespace {

void stable_rank(std::span<const Potential> x, std::vector<std::size_t>& order) {
    order.resize(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : a < b;
    });
}

struct WeightedEvent {
    CoupledEventKind kind;
    std::size_t rank;
    double weight;  // rate divided by base^shift
};

/// Enumerates events with rates expressed relative to base^shift.
void enumerate(std::span<const Potential> u, std::span<const Potential> v, const std::vector<std::size_t>& ou,
               const std::vector<std::size_t>& ov, const PowerTable& powers, Potential shift,
               RateConvention convention, std::vector<WeightedEvent>& out) {
    out.clear();
    const auto rel = [&](Potential k) { return powers.inverse_power(shift - k); };
    for (std::size_t j = 0; j < u.size(); ++j) {
        const Potential a = u[ou[j]];
        const Potential b = v[ov[j]];
        const Potential lo = std::min(a, b);
        const Potential hi = std::max(a, b);
        if (lo > 0) {
            out.push_back({CoupledEventKind::joint_spike, j, rel(lo)});
        }
        if (a != b) {
            double w = 0.0;
            if (convention == RateConvention::paper_literal) {
                w = rel(hi - lo);
            } else {
                w = rel(hi) - (lo > 0 ? rel(lo) : 0.0);
            }
            if (w > 0.0) {
                out.push_back({CoupledEventKind::solo_spike, j, w});
            }
        }
        if (hi > 0) {
            out.push_back({CoupledEventKind::joint_leak, j, powers.inverse_power(shift)});
        }
    }
}

void spike_in_place(std::vector<Potential>& x, std::size_t a) {
    for (auto& p : x) {
        ++p;
    }
    x[a] = 0;
}

void leak_in_place(std::vector<Potential>& x, std::size_t a, LeakKind leak) {
    if (x[a] > 0) {
        x[a] = leak == LeakKind::reset ? 0 : x[a] - 1;
    }
}

void apply_in_place(std::vector<Potential>& u, std::vector<Potential>& v, const std::vector<std::size_t>& ou,
                    const std::vector<std::size_t>& ov, CoupledEventKind kind, std::size_t rank, LeakKind leak) {
    const std::size_t a = ou[rank];
    const std::size_t b = ov[rank];
    switch (kind) {
    case CoupledEventKind::joint_spike:
        spike_in_place(u, a);
        spike_in_place(v, b);
        break;
    case CoupledEventKind::solo_spike:
        if (u[a] > v[b]) {
            spike_in_place(u, a);
        } else {
            spike_in_place(v, b);
        }
        break;
    case CoupledEventKind::joint_leak:
        leak_in_place(u, a, leak);
        leak_in_place(v, b, leak);
        break;
    }
}

bool is_null(std::span<const Potential> x) {
    return std::all_of(x.begin(), x.end(), [](Potential p) { return p == 0; });
}

bool coalesced_by_rank(std::span<const Potential> u, std::span<const Potential> v,
                       const std::vector<std::size_t>& ou, const std::vector<std::size_t>& ov) {
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (u[ou[j]] != v[ov[j]]) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<CoupledEvent> coupled_rates(const CoupledState& x, const ModelSpec& spec, RateConvention convention) {
    if (x.u.is_null() || x.v.is_null()) {
        throw std::invalid_argument("coupled_rates: components must not be the null list");
    }
    std::vector<std::size_t> ou;
    std::vector<std::size_t> ov;
    stable_rank(x.u.values(), ou);
    stable_rank(x.v.values(), ov);
    const PowerTable powers(spec.base);
    const Potential shift = std::max(x.u.max(), x.v.max());
    const double scale = powers.power(shift);
    std::vector<WeightedEvent> events;
    enumerate(x.u.values(), x.v.values(), ou, ov, powers, shift, convention, events);
    std::vector<CoupledEvent> out;
    out.reserve(events.size());
    for (const auto& e : events) {
        out.push_back({e.kind, e.rank, e.weight * scale});
    }
    return out;
}

CoupledState apply_coupled(const CoupledState& x, CoupledEventKind kind, std::size_t rank, LeakKind leak) {
    if (rank >= x.u.size()) {
        throw std::out_of_range("apply_coupled: rank out of range");
    }
    std::vector<Potential> u(x.u.values().begin(), x.u.values().end());
    std::vector<Potential> v(x.v.values().begin(), x.v.values().end());
    std::vector<std::size_t> ou;
    std::vector<std::size_t> ov;
    stable_rank(u, ou);
    stable_rank(v, ov);
    apply_in_place(u, v, ou, ov, kind, rank, leak);
    return CoupledState(PotentialList(std::move(u)), PotentialList(std::move(v)));
}

CouplingOutcome simulate_coupled(const PotentialList& u0, const PotentialList& v0, const ModelSpec& spec,
                                 RateConvention convention, const CouplingStop& stop, RngStream& rng) {
    spec.validate();
    if (u0.size() != v0.size() || u0.size() != static_cast<std::size_t>(spec.n)) {
        throw std::invalid_argument("simulate_coupled: both lists must have n neurons");
    }
    if (u0.is_null() || v0.is_null()) {
        throw std::invalid_argument("simulate_coupled: initial lists must not be the null list");
    }
    const std::size_t n = u0.size();
    const std::uint64_t window = e1_window(n);
    const bool check_e1 = in_set(u0.values(), SetKind::w) && in_set(v0.values(), SetKind::w);
    const PowerTable powers(spec.base);

    std::vector<Potential> u(u0.values().begin(), u0.values().end());
    std::vector<Potential> v(v0.values().begin(), v0.values().end());
    std::vector<std::size_t> ou;
    std::vector<std::size_t> ov;
    std::vector<WeightedEvent> events;
    events.reserve(3 * n);

    CouplingOutcome out;
    double t = 0.0;
    bool e1_alive = true;

    auto finish = [&](StopReason reason, double at) {
        out.stop_reason = reason;
        out.time = at;
        return out;
    };

    stable_rank(u, ou);
    stable_rank(v, ov);
    if (coalesced_by_rank(u, v, ou, ov)) {
        out.n_c = 0;
        out.t_nc = 0.0;
    }
    if (stop.u_target && in_set(u, *stop.u_target)) {
        out.u_hit_time = 0.0;
        return finish(StopReason::target, 0.0);
    }

    for (;;) {
        const bool u_null = is_null(u);
        const bool v_null = is_null(v);
        if (u_null && v_null) {
            return finish(StopReason::absorbed, t);
        }
        if (stop.until_resolved && out.n_c && out.jumps >= window) {
            return finish(StopReason::target, t);
        }
        if (stop.jump_budget && out.jumps >= *stop.jump_budget) {
            return finish(StopReason::budget, t);
        }

        const Potential shift = std::max(u[ou.back()], v[ov.back()]);
        enumerate(u, v, ou, ov, powers, shift, convention, events);
        double total = 0.0;
        for (const auto& e : events) {
            total += e.weight;
        }
        const double scale = powers.power(shift);
        const double e = rng.exponential();
        const double dt = std::isfinite(scale)
                              ? e / (scale * total)
                              : std::exp(std::log(e) - static_cast<double>(shift) * powers.log_base() - std::log(total));
        if (stop.horizon && t + dt > *stop.horizon) {
            return finish(StopReason::horizon, *stop.horizon);
        }
        double x = rng.uniform() * total;
        std::size_t pick = events.size() - 1;
        for (std::size_t i = 0; i < events.size(); ++i) {
            if (x < events[i].weight) {
                pick = i;
                break;
            }
            x -= events[i].weight;
        }
        const WeightedEvent chosen = events[pick];
        apply_in_place(u, v, ou, ov, chosen.kind, chosen.rank, spec.leak);
        t += dt;
        ++out.jumps;

        if (chosen.kind == CoupledEventKind::joint_leak && !out.n_dagger) {
            out.n_dagger = out.jumps;
        }
        if (out.jumps <= window) {
            e1_alive = e1_alive && chosen.rank == n - 1 && chosen.kind != CoupledEventKind::joint_leak;
        }

        stable_rank(u, ou);
        stable_rank(v, ov);
        if (!out.n_c && coalesced_by_rank(u, v, ou, ov)) {
            out.n_c = out.jumps;
            out.t_nc = t;
        }
        if (out.jumps == window) {
            out.e1_occurred = e1_alive;
            out.ladder_at_window = in_set(u, SetKind::l) && in_set(v, SetKind::l);
            if (check_e1 && e1_alive && (!out.n_c || *out.n_c > window)) {
                throw std::logic_error("coupling: E_1 occurred from partial-ladder starts but n_c > 2 ceil(sqrt n)");
            }
        }
        if (!out.u_tau && is_null(u)) {
            out.u_tau = t;
        }
        if (!out.v_tau && is_null(v)) {
            out.v_tau = t;
        }
        if (stop.u_target && in_set(u, *stop.u_target)) {
            out.u_hit_time = t;
            return finish(StopReason::target, t);
        }
        if (stop.u_target && out.u_tau) {
            return finish(StopReason::absorbed, t);
        }
    }
}

void write_coupling_csv(std::ostream& out, std::span<const CouplingOutcome> outcomes) {
    out << coupling_csv_header << '\n';
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        out << i << ',' << format_count(o.n_c) << ',' << format_count(o.n_dagger) << ',' << format_real(o.t_nc)
            << ',' << (o.e1_occurred ? 1 : 0) << ',' << o.jumps << ',' << to_string(o.stop_reason) << '\n';
    }
}

}  // namespace leakynet
