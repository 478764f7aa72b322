#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "leakynet/coupling.hpp"
#include "leakynet/experiments.hpp"
#include "leakynet/oracle.hpp"
#include "test_support.hpp"

using namespace leakynet;

namespace {

const double e = std::numbers::e;

double rate_of(const std::vector<CoupledEvent>& events, CoupledEventKind kind, std::size_t rank) {
    double r = 0.0;
    for (const auto& ev : events) {
        if (ev.kind == kind && ev.rank == rank) r += ev.rate;
    }
    return r;
}

// Sorted potentials, used as an independent coalescence check.
std::vector<Potential> sorted(const PotentialList& u) { return u.sorted(); }

}  // namespace

TEST(CoupledRates, LiteralConvention) {
    const CoupledState x(PotentialList{0, 3}, PotentialList{0, 1});
    const auto ev = coupled_rates(x, ModelSpec{2, LeakKind::reset, e}, RateConvention::paper_literal);
    EXPECT_NEAR(rate_of(ev, CoupledEventKind::solo_spike, 1), e * e, 1e-12);
    EXPECT_NEAR(rate_of(ev, CoupledEventKind::joint_spike, 1), e, 1e-12);
    EXPECT_NEAR(rate_of(ev, CoupledEventKind::joint_leak, 1), 1.0, 0.0);
    EXPECT_NEAR(e * e, 7.389, 1e-3);
}

TEST(CoupledRates, MarginalPreservingConvention) {
    const CoupledState x(PotentialList{0, 3}, PotentialList{0, 1});
    const auto ev = coupled_rates(x, ModelSpec{2, LeakKind::reset, e}, RateConvention::marginal_preserving);
    const double solo = rate_of(ev, CoupledEventKind::solo_spike, 1);
    const double joint = rate_of(ev, CoupledEventKind::joint_spike, 1);
    EXPECT_NEAR(solo, e * e * e - e, 1e-12);
    EXPECT_NEAR(solo, 17.367, 1e-3);
    EXPECT_NEAR(joint, e, 1e-12);
    EXPECT_NEAR(solo + joint, e * e * e, 1e-12);
}

TEST(CoupledRates, SymmetricPairHasNoSoloEvent) {
    const CoupledState x(PotentialList{0, 2}, PotentialList{0, 2});
    for (auto c : {RateConvention::paper_literal, RateConvention::marginal_preserving}) {
        const auto ev = coupled_rates(x, ModelSpec{2, LeakKind::decrement, e}, c);
        EXPECT_EQ(rate_of(ev, CoupledEventKind::solo_spike, 1), 0.0);
        EXPECT_NEAR(rate_of(ev, CoupledEventKind::joint_spike, 1), e * e, 1e-12);
        EXPECT_EQ(rate_of(ev, CoupledEventKind::joint_leak, 1), 1.0);
        EXPECT_EQ(ev.size(), 2u);
    }
}

TEST(CoupledRates, RejectsTrapAndMismatch) {
    EXPECT_THROW(coupled_rates(CoupledState(PotentialList{0, 0}, PotentialList{0, 1}), ModelSpec{2, LeakKind::reset, e},
                               RateConvention::marginal_preserving),
                 std::invalid_argument);
    EXPECT_THROW(CoupledState(PotentialList{0, 1}, PotentialList{0, 1, 2}), std::invalid_argument);
}

TEST(CoupledRates, MarginalsMatchEachComponent) {
    std::mt19937_64 g(41);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = 2 + trial % 8;
        const PotentialList u = leakynet::testing::random_non_null(g, n, 6);
        const PotentialList v = leakynet::testing::random_non_null(g, n, 6);
        const CoupledState x(u, v);
        const ModelSpec spec{static_cast<int>(n), LeakKind::reset, 2.0};
        const auto ev = coupled_rates(x, spec, RateConvention::marginal_preserving);
        const auto su = sorted(u), sv = sorted(v);
        for (std::size_t j = 0; j < n; ++j) {
            const double joint = rate_of(ev, CoupledEventKind::joint_spike, j);
            const double solo = rate_of(ev, CoupledEventKind::solo_spike, j);
            const double wu = su[j] > 0 ? std::pow(2.0, double(su[j])) : 0.0;
            const double wv = sv[j] > 0 ? std::pow(2.0, double(sv[j])) : 0.0;
            // The solo event moves only the leader, so each side sees its own rate.
            const double u_rate = joint + (su[j] > sv[j] ? solo : 0.0);
            const double v_rate = joint + (sv[j] > su[j] ? solo : 0.0);
            ASSERT_NEAR(u_rate, wu, 1e-9 * std::max(1.0, wu));
            ASSERT_NEAR(v_rate, wv, 1e-9 * std::max(1.0, wv));
            const double leak = rate_of(ev, CoupledEventKind::joint_leak, j);
            ASSERT_NEAR(leak, su[j] > 0 || sv[j] > 0 ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(Coalescence, Examples) {
    EXPECT_TRUE(is_coalesced(CoupledState(PotentialList{0, 2, 1}, PotentialList{1, 0, 2})));
    EXPECT_FALSE(is_coalesced(CoupledState(PotentialList{0, 2, 2}, PotentialList{0, 1, 2})));
    RngStream r(1, 0);
    const auto out = simulate_coupled(PotentialList{0, 1, 2}, PotentialList{2, 1, 0}, ModelSpec{3, LeakKind::reset, e},
                                      RateConvention::marginal_preserving, CouplingStop{}, r);
    ASSERT_TRUE(out.n_c.has_value());
    EXPECT_EQ(*out.n_c, 0u);
    EXPECT_EQ(*out.t_nc, 0.0);
}

TEST(Coalescence, PermanentUnderBothConventions) {
    for (auto c : {RateConvention::paper_literal, RateConvention::marginal_preserving}) {
        for (LeakKind kind : {LeakKind::reset, LeakKind::decrement}) {
            const ModelSpec spec{5, kind, e};
            for (std::uint64_t i = 0; i < 1000; ++i) {
                RngStream r = derive_stream(50, i);
                CoupledState x(draw_w_list(5, r), draw_w_list(5, r));
                bool joined = is_coalesced(x);
                for (int step = 0; step < 200; ++step) {
                    if (x.u.is_null() || x.v.is_null()) break;
                    const auto ev = coupled_rates(x, spec, c);
                    double total = 0.0;
                    for (const auto& a : ev) total += a.rate;
                    double pick = r.uniform() * total;
                    std::size_t k = 0;
                    while (k + 1 < ev.size() && pick >= ev[k].rate) pick -= ev[k++].rate;
                    x = apply_coupled(x, ev[k].kind, ev[k].rank, kind);
                    const bool now = sorted(x.u) == sorted(x.v);
                    ASSERT_EQ(now, is_coalesced(x));
                    if (joined) ASSERT_TRUE(now);
                    joined = joined || now;
                }
            }
        }
    }
}

TEST(Coupling, WindowAndE1Bound) {
    EXPECT_EQ(e1_window(16), 8u);
    EXPECT_EQ(e1_window(17), 10u);
    for (std::size_t n : {4u, 9u, 16u}) {
        CouplingConfig c;
        c.spec = ModelSpec{static_cast<int>(n), LeakKind::reset, e};
        c.replicas = 300;
        c.seed = 7;
        CouplingReport r;
        ASSERT_NO_THROW(r = coupling_stats(c));
        EXPECT_EQ(r.e1_violations, 0u);
        EXPECT_EQ(r.e1_ladder_at_window, r.e1_count);
        for (const auto& o : r.outcomes) {
            if (o.e1_occurred) {
                ASSERT_TRUE(o.n_c.has_value());
                ASSERT_LE(*o.n_c, e1_window(n));
            }
            ASSERT_EQ(o.n_c.has_value(), o.t_nc.has_value());
        }
    }
}

TEST(Coupling, DrawWListIsInW) {
    RngStream r(3, 0);
    for (std::size_t n = 2; n <= 30; ++n) {
        for (int i = 0; i < 200; ++i) {
            const PotentialList w = draw_w_list(n, r);
            ASSERT_TRUE(classify(w).in_w) << w.to_string();
        }
    }
}

TEST(Coupling, ComponentMarginalMatchesOracleMean) {
    // u-component trapping time under the coupling against the exact chain.
    const ModelSpec spec{3, LeakKind::reset, e};
    const double exact = mean_absorption(build_oracle(spec, 20), ladder(3));
    double sum = 0.0, sum2 = 0.0;
    const int reps = 40000;
    CouplingStop stop;
    stop.until_resolved = false;
    for (int i = 0; i < reps; ++i) {
        RngStream r = derive_stream(91, static_cast<std::uint64_t>(i));
        const auto o = simulate_coupled(ladder(3), PotentialList{4, 0, 1}, spec, RateConvention::marginal_preserving, stop, r);
        ASSERT_TRUE(o.u_tau.has_value());
        sum += *o.u_tau;
        sum2 += *o.u_tau * *o.u_tau;
    }
    const double m = sum / reps;
    const double se = std::sqrt((sum2 / reps - m * m) / reps);
    EXPECT_NEAR(m, exact, 4.0 * se);
}

TEST(Coupling, UniformClosenessProxy) {
    // |P(tau^w > t) - P(tau^w' > t)| <= P(n_c > n_dagger) + 4 SE at N = 6.
    const std::size_t n = 6;
    const ModelSpec spec{6, LeakKind::reset, e};
    RngStream pair_rng(5, 0);
    const PotentialList w = draw_w_list(n, pair_rng), w2 = draw_w_list(n, pair_rng);
    const int reps = 2000;
    std::uint64_t dagger_first = 0;
    for (int i = 0; i < reps; ++i) {
        RngStream r = derive_stream(6, static_cast<std::uint64_t>(i));
        const auto o = simulate_coupled(w, w2, spec, RateConvention::marginal_preserving, CouplingStop{}, r);
        dagger_first += o.n_dagger && (!o.n_c || *o.n_dagger < *o.n_c);
    }
    const double p_bad = double(dagger_first) / reps;
    for (double t : {1.0, 5.0}) {
        auto survive = [&](const PotentialList& start, std::uint64_t seed) {
            int alive = 0;
            for (int i = 0; i < reps; ++i) {
                RngStream r = derive_stream(seed, static_cast<std::uint64_t>(i));
                SimulationOptions opt;
                opt.stop.horizon = t;
                alive += simulate(start, spec, opt, r).stop_reason == StopReason::horizon;
            }
            return double(alive) / reps;
        };
        const double a = survive(w, 100), b = survive(w2, 200);
        const double se = std::sqrt(a * (1 - a) / reps + b * (1 - b) / reps + p_bad * (1 - p_bad) / reps);
        EXPECT_LE(std::abs(a - b), p_bad + 4.0 * se) << "t = " << t;
    }
}

TEST(Coupling, CsvHeaderAndAbsentFields) {
    CouplingOutcome o;
    o.jumps = 3;
    o.stop_reason = StopReason::budget;
    std::ostringstream s;
    write_coupling_csv(s, std::vector<CouplingOutcome>{o});
    EXPECT_EQ(s.str(), "replica,n_c,n_dagger,t_nc,e1,jumps,stop_reason\n0,,,,0,3,budget\n");
}

TEST(Coupling, ConventionNames) {
    EXPECT_EQ(parse_rate_convention("paper_literal"), RateConvention::paper_literal);
    EXPECT_EQ(to_string(RateConvention::marginal_preserving), "marginal_preserving");
    EXPECT_THROW(parse_rate_convention("other"), std::invalid_argument);
}
