#include "supmax/stats.hpp"

#include "supmax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace supmax {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    detail::require(trials > 0, "Wilson interval needs at least one trial");
    detail::require(successes <= trials, "successes exceed trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // clamp the endpoints so they bracket p exactly at 0 and 1
    return {std::clamp(std::min(centre - half, p), 0.0, 1.0),
            std::clamp(std::max(centre + half, p), 0.0, 1.0)};
}

double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t kBlock = 64;
    if (xs.size() <= kBlock) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanEstimate estimate_mean(std::span<const double> xs, double z) {
    detail::require(!xs.empty(), "mean of an empty sample");
    MeanEstimate m;
    m.n = xs.size();
    const double n = static_cast<double>(xs.size());
    m.mean = pairwise_sum(xs) / n;
    std::vector<double> sq(xs.size());
    std::transform(xs.begin(), xs.end(), sq.begin(),
                   [&](double x) { return (x - m.mean) * (x - m.mean); });
    const double var = xs.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    m.se = std::sqrt(var / n);
    m.ci_low = m.mean - z * m.se;
    m.ci_high = m.mean + z * m.se;
    return m;
}

double TailEstimate::se() const {
    if (trials == 0) return 0.0;
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

TailEstimate make_tail_estimate(std::uint64_t successes, std::uint64_t trials, double level_a,
                                std::optional<double> analytic) {
    const Interval ci = wilson_interval(successes, trials);
    TailEstimate e;
    e.trials = trials;
    e.successes = successes;
    e.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    e.analytic = analytic;
    e.level_a = level_a;
    return e;
}

double ks_critical_1pct(std::size_t n) {
    return 1.628 / std::sqrt(static_cast<double>(n));
}

} // namespace supmax
