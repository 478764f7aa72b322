#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace leakynet {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Standard normal quantile function.
double normal_quantile(double p);

/// Two-sided normal interval mean +- z * se at the given level.
Interval normal_interval(double mean, double se, double level = 0.99);

/// Wilson score interval for a binomial proportion.
Interval binomial_interval(std::uint64_t successes, std::uint64_t trials, double level = 0.99);

double mean(std::span<const double> x);
/// Standard error of the mean (sample standard deviation over sqrt n).
double standard_error(std::span<const double> x);

/// The ceil(p R)-th order statistic (1-based) of R samples; p in (0, 1].
double order_statistic_quantile(std::span<const double> samples, double p);

/// KS distance between the samples scaled by their mean and Exp(1).
/// Throws std::invalid_argument for fewer than 2 samples or a non-positive one.
double ks_exp1(std::span<const double> samples);

/// KS distance between an arbitrary sample and Exp(1), no rescaling.
double ks_exp1_unscaled(std::span<const double> samples);

/// Two-sample KS distance; +inf entries are allowed and compare equal.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical values, c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical(std::size_t n, double alpha = 0.01);
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha = 0.01);

/// Quantile estimates of bootstrap resamples, ascending. Resampling indices
/// come from stream (seed, 0).
std::vector<double> bootstrap_quantiles(std::span<const double> samples, double p, std::size_t resamples,
                                        std::uint64_t seed);

struct QuantileEstimate {
    double value = 0.0;
    Interval interval;        // two-sided percentile bootstrap
    double lower_bound = 0.0; // one-sided lower percentile bootstrap bound
};

/// Empirical p-quantile with a bootstrap interval at the given level.
/// Throws std::invalid_argument with fewer than 100 samples.
QuantileEstimate estimate_quantile(std::span<const double> samples, double p, std::uint64_t seed,
                                   std::size_t resamples = 1000, double level = 0.99);

/// The quantile level 1 - e^-1 at which P(tau > c) = e^-1.
double c_level();

}  // namespace leakynet
