#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "leakynet/rng.hpp"
#include "leakynet/stats.hpp"

using namespace leakynet;

namespace {

std::vector<double> exp_samples(std::size_t n, std::uint64_t seed) {
    RngStream r(seed, 0);
    std::vector<double> x(n);
    for (auto& v : x) v = r.exponential();
    return x;
}

}  // namespace

TEST(Stats, NormalQuantile) {
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
    EXPECT_NEAR(normal_quantile(0.995), 2.5758293035489004, 1e-12);
    EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
    EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-9);
    for (double p : {0.01, 0.2, 0.7, 0.999}) {
        EXPECT_NEAR(0.5 * std::erfc(-normal_quantile(p) / std::sqrt(2.0)), p, 1e-14);
    }
}

TEST(Stats, Intervals) {
    const Interval n = normal_interval(10.0, 2.0, 0.99);
    EXPECT_NEAR(n.lo, 10.0 - 2.5758293035489004 * 2.0, 1e-12);
    EXPECT_TRUE(n.contains(10.0));

    // Wilson: (p + z^2/2n +- z sqrt(p(1-p)/n + z^2/4n^2)) / (1 + z^2/n).
    const double z = 2.5758293035489004, p = 0.3, k = 100.0;
    const double centre = (p + z * z / (2 * k)) / (1 + z * z / k);
    const double half = z * std::sqrt(p * (1 - p) / k + z * z / (4 * k * k)) / (1 + z * z / k);
    const Interval w = binomial_interval(30, 100, 0.99);
    EXPECT_NEAR(w.lo, centre - half, 1e-12);
    EXPECT_NEAR(w.hi, centre + half, 1e-12);
    const Interval all = binomial_interval(10, 10);
    EXPECT_NEAR(all.hi, 1.0, 1e-15);
    EXPECT_LT(all.lo, 1.0);
}

TEST(Stats, MeanAndStandardError) {
    const std::vector<double> x{1, 2, 3, 4};
    EXPECT_EQ(mean(x), 2.5);
    EXPECT_NEAR(standard_error(x), std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

TEST(Stats, OrderStatisticConvention) {
    std::vector<double> x(100);
    std::iota(x.begin(), x.end(), 1.0);
    EXPECT_EQ(order_statistic_quantile(x, 0.5), 50.0);
    EXPECT_EQ(order_statistic_quantile(x, 0.501), 51.0);
    EXPECT_EQ(order_statistic_quantile(x, 1.0), 100.0);
    EXPECT_EQ(order_statistic_quantile(x, 0.001), 1.0);
}

TEST(Stats, KsOfConstantSample) {
    const std::vector<double> x(50, 3.7);
    EXPECT_NEAR(ks_exp1(x), 1.0 - std::exp(-1.0), 1e-15);
    EXPECT_THROW(ks_exp1(std::vector<double>{1.0}), std::invalid_argument);
    EXPECT_THROW(ks_exp1(std::vector<double>{1.0, 0.0}), std::invalid_argument);
}

TEST(Stats, KsCriticalValues) {
    EXPECT_NEAR(ks_critical(10000), 1.6276 / 100.0, 1e-6);
    EXPECT_NEAR(ks_critical_two_sample(2000, 2000), 1.6276 * std::sqrt(4000.0 / (2000.0 * 2000.0)), 1e-6);
}

TEST(Stats, KsOnExponentialSamplesRejectsRarely) {
    int accepted = 0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) {
        const auto x = exp_samples(10000, 1000 + static_cast<std::uint64_t>(i));
        accepted += ks_exp1_unscaled(x) < 1.63 / 100.0;
    }
    EXPECT_GE(accepted, static_cast<int>(0.98 * reps));
}

TEST(Stats, KsTwoSample) {
    const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3, 4};
    EXPECT_EQ(ks_two_sample(a, b), 0.0);
    const std::vector<double> c{5, 6, 7, 8};
    EXPECT_EQ(ks_two_sample(a, c), 1.0);
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> d{1, 2, inf, inf}, f{1, 2, 3, inf};
    EXPECT_NEAR(ks_two_sample(d, f), 0.25, 1e-15);
    EXPECT_EQ(ks_two_sample(d, d), 0.0);
}

TEST(Stats, QuantileEstimateOnSyntheticExponential) {
    const auto x = exp_samples(100000, 3);
    const QuantileEstimate q = estimate_quantile(x, c_level(), 4);
    EXPECT_NEAR(q.value, 1.0, 0.02);
    EXPECT_TRUE(q.interval.contains(q.value));
    EXPECT_LE(q.lower_bound, q.value);
    EXPECT_GE(q.lower_bound, q.interval.lo);
    EXPECT_THROW(estimate_quantile(std::vector<double>(99, 1.0), 0.5, 1), std::invalid_argument);
    EXPECT_NEAR(c_level(), 1.0 - std::exp(-1.0), 1e-16);
}

TEST(Stats, BootstrapIsDeterministicAndSorted) {
    const auto x = exp_samples(500, 8);
    const auto a = bootstrap_quantiles(x, 0.5, 200, 9);
    EXPECT_EQ(a, bootstrap_quantiles(x, 0.5, 200, 9));
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_NE(a, bootstrap_quantiles(x, 0.5, 200, 10));
}
