#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "leakynet/model.hpp"
#include "leakynet/potential_list.hpp"
#include "leakynet/sets.hpp"
#include "leakynet/transitions.hpp"
#include "test_support.hpp"

using namespace leakynet;
using leakynet::testing::literal_sets;
using leakynet::testing::random_list;
using leakynet::testing::random_non_null;

TEST(PotentialList, RejectsBrokenInvariants) {
    EXPECT_THROW(PotentialList({1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(PotentialList({0}), std::invalid_argument);
    EXPECT_THROW(PotentialList({0, -1}), std::invalid_argument);
    EXPECT_NO_THROW(PotentialList({0, 0}));
    EXPECT_TRUE(validate_potentials(std::vector<Potential>{1, 2, 3}).find("0") != std::string::npos);
}

TEST(PotentialList, Accessors) {
    PotentialList u{0, 3, 1};
    EXPECT_EQ(u.size(), 3u);
    EXPECT_EQ(u.max(), 3);
    EXPECT_EQ(u.positive_count(), 2u);
    EXPECT_FALSE(u.is_null());
    EXPECT_TRUE(PotentialList::null(4).is_null());
    EXPECT_EQ(u.sorted(), (std::vector<Potential>{0, 1, 3}));
}

TEST(ModelSpec, Validation) {
    EXPECT_THROW((ModelSpec{1, LeakKind::reset, 2.0}.validate()), std::invalid_argument);
    EXPECT_THROW((ModelSpec{3, LeakKind::reset, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((ModelSpec{3, LeakKind::reset, INFINITY}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((ModelSpec{3, LeakKind::decrement, 1.5}.validate()));
    EXPECT_EQ(parse_leak_kind("decrement"), LeakKind::decrement);
    EXPECT_THROW(parse_leak_kind("drop"), std::invalid_argument);
}

TEST(Spike, Examples) {
    EXPECT_EQ(apply_spike(PotentialList{0, 3, 1}, 1), (PotentialList{1, 0, 2}));
    EXPECT_EQ(apply_spike(PotentialList{0, 1}, 1), (PotentialList{1, 0}));
    EXPECT_THROW(apply_spike(PotentialList{0, 3, 1}, 0), std::invalid_argument);
    EXPECT_THROW(apply_spike(PotentialList{0, 3, 1}, 3), std::out_of_range);
}

TEST(Leak, Examples) {
    const PotentialList u{0, 3, 1};
    EXPECT_EQ(apply_leak(u, 1, LeakKind::reset), (PotentialList{0, 0, 1}));
    EXPECT_EQ(apply_leak(u, 1, LeakKind::decrement), (PotentialList{0, 2, 1}));
    EXPECT_EQ(apply_leak(u, 0, LeakKind::reset), u);
    EXPECT_EQ(apply_leak(u, 0, LeakKind::decrement), u);
    EXPECT_THROW(apply_leak(u, 5, LeakKind::reset), std::out_of_range);
}

TEST(Spike, LawAndClosureOnRandomStates) {
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 20000; ++trial) {
        const std::size_t n = 2 + trial % 11;
        const PotentialList u = random_list(g, n, 3 * static_cast<Potential>(n));
        for (std::size_t a = 0; a < n; ++a) {
            if (u[a] > 0) {
                const PotentialList s = apply_spike(u, a);
                for (std::size_t b = 0; b < n; ++b) {
                    ASSERT_EQ(s[b], b == a ? 0 : u[b] + 1);
                }
            }
            for (auto kind : {LeakKind::reset, LeakKind::decrement}) {
                const PotentialList l = apply_leak(u, a, kind);
                for (std::size_t b = 0; b < n; ++b) {
                    const Potential expected =
                        b != a ? u[b] : (kind == LeakKind::reset ? 0 : std::max<Potential>(u[b] - 1, 0));
                    ASSERT_EQ(l[b], expected);
                }
            }
        }
    }
}

TEST(Trap, NoEventsLeaveTheNullList) {
    const PotentialList z = PotentialList::null(5);
    for (std::size_t a = 0; a < 5; ++a) {
        EXPECT_EQ(apply_leak(z, a, LeakKind::reset), z);
        EXPECT_EQ(apply_leak(z, a, LeakKind::decrement), z);
    }
    const SpikeWeights w = spike_weights(z, std::numbers::e);
    EXPECT_EQ(w.total(std::numbers::e), 0.0);
    EXPECT_EQ(effective_leak_count(z), 0u);
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank_order(PotentialList{2, 0, 2}).order, (std::vector<std::size_t>{1, 0, 2}));
    EXPECT_EQ(rank_order(PotentialList{3, 0, 2, 1}).order, (std::vector<std::size_t>{1, 3, 2, 0}));
    EXPECT_EQ(rank_order(PotentialList{0, 0, 0}).order, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Rank, PermutationSortedAndTieBroken) {
    std::mt19937_64 g(12);
    for (int trial = 0; trial < 5000; ++trial) {
        const std::size_t n = 2 + trial % 15;
        const PotentialList u = random_list(g, n, 4);
        const RankOrder r = rank_order(u);
        std::vector<bool> seen(n, false);
        for (auto a : r.order) {
            ASSERT_LT(a, n);
            ASSERT_FALSE(seen[a]);
            seen[a] = true;
        }
        EXPECT_EQ(u[r.lowest()], 0);
        for (std::size_t j = 1; j < n; ++j) {
            const auto p = r.order[j - 1], q = r.order[j];
            ASSERT_LE(u[p], u[q]);
            if (u[p] == u[q]) {
                ASSERT_LT(p, q);
            }
        }
    }
}

TEST(Weights, Examples) {
    const double e = std::numbers::e;
    SpikeWeights w = spike_weights(PotentialList{0, 1}, e);
    EXPECT_NEAR(w.total(e), e, 1e-15);
    EXPECT_EQ(w.probability(0), 0.0);
    EXPECT_EQ(w.probability(1), 1.0);

    w = spike_weights(PotentialList{0, 1, 2}, e);
    EXPECT_EQ(w.max_potential, 2);
    EXPECT_NEAR(w.shifted_sum, std::exp(-1.0) + 1.0, 1e-15);
    EXPECT_NEAR(w.total(e), e + e * e, 1e-12);
    EXPECT_NEAR(w.total(e), 10.1073, 1e-4);
    EXPECT_NEAR(w.probability(2), e * e / (e + e * e), 1e-15);

    EXPECT_EQ(spike_weights(PotentialList{0, 0}, 3.0).total(3.0), 0.0);
}

TEST(Weights, LargePotentialsStayFinite) {
    const PotentialList u{0, 10000, 9999};
    const SpikeWeights w = spike_weights(u, std::numbers::e);
    EXPECT_TRUE(std::isfinite(w.shifted_sum));
    EXPECT_NEAR(w.log_total(std::numbers::e), 10000.0 + std::log1p(std::exp(-1.0)), 1e-9);
    EXPECT_NEAR(w.probability(1), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(Leak, EffectiveCount) {
    EXPECT_EQ(effective_leak_count(PotentialList{0, 3, 1}), 2u);
    EXPECT_EQ(effective_leak_count(PotentialList::null(3)), 0u);
    for (std::size_t n = 2; n < 20; ++n) {
        EXPECT_EQ(effective_leak_count(ladder(n)), n - 1);
    }
}

TEST(Ladder, Construction) {
    EXPECT_EQ(ladder(2), (PotentialList{0, 1}));
    EXPECT_EQ(ladder(4), (PotentialList{0, 1, 2, 3}));
    EXPECT_TRUE(classify(ladder(4)).in_l);
    EXPECT_TRUE(classify(ladder(10)).in_s3);
}

TEST(Ladder, TopSpikeFoldExample) {
    EXPECT_EQ(fold_top_spikes(PotentialList{0, 5, 2}, 2), (PotentialList{2, 1, 0}));
    EXPECT_TRUE(classify(fold_top_spikes(PotentialList{0, 5, 2}, 2)).in_l);
    EXPECT_THROW(spike_top(PotentialList::null(3)), std::invalid_argument);
}

TEST(Ladder, TopSpikeFoldReachesLadderFromEveryNonNullState) {
    std::mt19937_64 g(13);
    for (std::size_t n = 2; n <= 12; ++n) {
        for (int trial = 0; trial < 1000; ++trial) {
            const PotentialList u = random_non_null(g, n, 2 * static_cast<Potential>(n));
            const PotentialList folded = fold_top_spikes(u, n - 1);
            ASSERT_TRUE(classify(folded).in_l) << u.to_string();
        }
    }
}

TEST(Sets, Examples) {
    SetFlags f = classify(PotentialList{0, 1, 2, 7});
    EXPECT_TRUE(f.in_w);
    EXPECT_FALSE(f.in_l);
    f = classify(PotentialList{0, 1, 1, 3});
    EXPECT_FALSE(f.in_w);
    EXPECT_TRUE(f.in_s2);
    f = classify(PotentialList{3, 0, 2, 1});
    EXPECT_TRUE(f.in_l);
    EXPECT_TRUE(f.in_w);
    EXPECT_TRUE(f.in_s3);
    EXPECT_TRUE(classify(PotentialList::null(4)).is_null);
}

TEST(Sets, MatchBruteForceDefinitions) {
    std::mt19937_64 g(14);
    for (std::size_t n = 2; n <= 16; ++n) {
        for (int trial = 0; trial < 400; ++trial) {
            // Mix sparse random lists with near-ladders so that w and l are exercised.
            PotentialList u = trial % 2 ? random_list(g, n, static_cast<Potential>(n) + 3)
                                        : fold_top_spikes(random_non_null(g, n, 3), trial % 4 == 0 ? n - 1 : n / 2);
            const auto lit = literal_sets(std::vector<Potential>(u.values().begin(), u.values().end()));
            const SetFlags f = classify(u);
            ASSERT_EQ(f.in_s0, lit.s0) << u.to_string();
            ASSERT_EQ(f.in_s1, lit.s1) << u.to_string();
            ASSERT_EQ(f.in_s2, lit.s2) << u.to_string();
            ASSERT_EQ(f.in_s3, lit.s3) << u.to_string();
            ASSERT_EQ(f.in_w, lit.w) << u.to_string();
            ASSERT_EQ(f.in_l, lit.l) << u.to_string();
            ASSERT_EQ(classify_sorted(u.sorted()), f);
        }
    }
}

TEST(Sets, GuaranteedNesting) {
    std::mt19937_64 g(15);
    for (std::size_t n : {5u, 9u, 16u, 25u}) {
        std::size_t in_w = 0;
        for (int trial = 0; trial < 100000; ++trial) {
            PotentialList u = trial % 2 ? random_list(g, n, static_cast<Potential>(n) + 4)
                                        : fold_top_spikes(random_non_null(g, n, 3), n - 1 - trial % 3);
            const SetFlags f = classify(u);
            in_w += f.in_w;
            if (f.in_l) ASSERT_TRUE(f.in_w);
            if (f.in_w) {
                ASSERT_TRUE(f.in_s3);
                ASSERT_TRUE(f.in_s2);
                ASSERT_TRUE(f.in_s1);
            }
        }
        EXPECT_GT(in_w, 1000u) << "n = " << n;
    }
}

TEST(Sets, ChainBelowWDoesNotHold) {
    // In s3 but not s2: five values with only one distinct positive value.
    SetFlags f = classify(PotentialList{0, 5, 5, 5, 5});
    EXPECT_TRUE(f.in_s3);
    EXPECT_FALSE(f.in_s2);
    // In s2 but not s1: four zeros exceed sqrt(7).
    f = classify(PotentialList{0, 0, 0, 0, 1, 2, 3});
    EXPECT_TRUE(f.in_s2);
    EXPECT_FALSE(f.in_s1);
}

TEST(Sets, IntegerRoots) {
    for (std::size_t n = 0; n < 2000; ++n) {
        const auto f = floor_sqrt(n);
        EXPECT_LE(f * f, n);
        EXPECT_GT((f + 1) * (f + 1), n);
        const auto c = ceil_sqrt(n);
        EXPECT_GE(c * c, n);
        if (c > 0) EXPECT_LT((c - 1) * (c - 1), n);
    }
    EXPECT_EQ(to_string(SetKind::w), "W");
    EXPECT_EQ(parse_set_kind("L"), SetKind::l);
    EXPECT_FALSE(parse_set_kind("x").has_value());
}
