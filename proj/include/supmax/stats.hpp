#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace supmax {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double low;
    double high;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

/// Fixed-order pairwise summation: the result depends only on the order of xs.
double pairwise_sum(std::span<const double> xs);

/// Mean with normal-approximation interval.
struct MeanEstimate {
    std::uint64_t n = 0;
    double mean = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

MeanEstimate estimate_mean(std::span<const double> xs, double z = kZ95);

/// Monte Carlo estimate of P{Y* >= a}.
struct TailEstimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::optional<double> analytic;
    double level_a = 0.0;

    /// Binomial standard error sqrt(p (1 - p) / n).
    double se() const;
};

TailEstimate make_tail_estimate(std::uint64_t successes, std::uint64_t trials, double level_a,
                                std::optional<double> analytic = std::nullopt);

/// One-sample Kolmogorov-Smirnov distance between sorted data and a CDF.
template <class Cdf>
double ks_distance(std::span<const double> sorted, const Cdf& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double above = static_cast<double>(i + 1) / n - f;
        const double below = f - static_cast<double>(i) / n;
        if (above > d) d = above;
        if (below > d) d = below;
    }
    return d;
}

/// Asymptotic 1% critical value of the KS statistic, 1.628 / sqrt(n).
double ks_critical_1pct(std::size_t n);

} // namespace supmax
