#include "leakynet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "leakynet/rng.hpp"

namespace leakynet {

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
    }
    // Acklam's rational approximation, polished by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    double x = 0.0;
    if (p < 0.02425) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p > 1 - 0.02425) {
        const double q = std::sqrt(-2 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    }
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

Interval normal_interval(double mean, double se, double level) {
    const double z = normal_quantile(0.5 + level / 2);
    return {mean - z * se, mean + z * se};
}

Interval binomial_interval(std::uint64_t successes, std::uint64_t trials, double level) {
    if (trials == 0) {
        throw std::invalid_argument("binomial_interval: no trials");
    }
    const double z = normal_quantile(0.5 + level / 2);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double mean(std::span<const double> x) {
    if (x.empty()) {
        throw std::invalid_argument("mean: no samples");
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double standard_error(std::span<const double> x) {
    if (x.size() < 2) {
        throw std::invalid_argument("standard_error: need at least 2 samples");
    }
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    const double n = static_cast<double>(x.size());
    return std::sqrt(ss / (n - 1) / n);
}

double order_statistic_quantile(std::span<const double> samples, double p) {
    if (samples.empty()) {
        throw std::invalid_argument("quantile: no samples");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("quantile: p must lie in (0, 1]");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    const auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size()) - 1e-12));
    const std::size_t k = std::clamp<std::size_t>(r, 1, sorted.size()) - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
    return sorted[k];
}

double ks_exp1_unscaled(std::span<const double> samples) {
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = -std::expm1(-x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_exp1(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("ks_exp1: need at least 2 samples");
    }
    for (double v : samples) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("ks_exp1: samples must be positive");
        }
    }
    const double m = mean(samples);
    std::vector<double> scaled(samples.begin(), samples.end());
    for (double& v : scaled) {
        v /= m;
    }
    return ks_exp1_unscaled(scaled);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_two_sample: empty sample");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        if (std::isinf(v)) {
            break;
        }
        while (i < x.size() && x[i] == v) {
            ++i;
        }
        while (j < y.size() && y[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    while (i < x.size() && std::isfinite(x[i])) {
        ++i;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    while (j < y.size() && std::isfinite(y[j])) {
        ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2)) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return std::sqrt(-0.5 * std::log(alpha / 2)) * std::sqrt((nn + mm) / (nn * mm));
}

std::vector<double> bootstrap_quantiles(std::span<const double> samples, double p, std::size_t resamples,
                                        std::uint64_t seed) {
    if (samples.empty()) {
        throw std::invalid_argument("bootstrap: no samples");
    }
    RngStream rng(seed, 0);
    std::vector<double> draw(samples.size());
    std::vector<double> out;
    out.reserve(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        for (double& v : draw) {
            v = samples[rng.below(samples.size())];
        }
        out.push_back(order_statistic_quantile(draw, p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuantileEstimate estimate_quantile(std::span<const double> samples, double p, std::uint64_t seed,
                                   std::size_t resamples, double level) {
    if (samples.size() < 100) {
        throw std::invalid_argument("estimate_quantile: need at least 100 samples, got " +
                                    std::to_string(samples.size()));
    }
    QuantileEstimate out;
    out.value = order_statistic_quantile(samples, p);
    const std::vector<double> boot = bootstrap_quantiles(samples, p, resamples, seed);
    const double tail = (1 - level) / 2;
    out.interval = {order_statistic_quantile(boot, tail), order_statistic_quantile(boot, 1 - tail)};
    out.lower_bound = order_statistic_quantile(boot, 1 - level);
    return out;
}

double c_level() { return -std::expm1(-1.0); }

}  // namespace leakynet
