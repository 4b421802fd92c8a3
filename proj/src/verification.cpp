#include "supmax/verification.hpp"

#include "supmax/errors.hpp"
#include "supmax/numerics.hpp"
#include "supmax/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace supmax {

using detail::require;

namespace {

// Running sums for one-pass moment estimates, merged in a fixed order.
struct MomentSums {
    std::uint64_t n = 0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s4 = 0.0;

    MomentSums& operator+=(const MomentSums& o) {
        n += o.n;
        s1 += o.s1;
        s2 += o.s2;
        s4 += o.s4;
        return *this;
    }
};

MeanEstimate from_sums(std::uint64_t n, double sum, double sum_sq, double z) {
    MeanEstimate m;
    m.n = n;
    if (n == 0) return m;
    const double nn = static_cast<double>(n);
    m.mean = sum / nn;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nn * m.mean * m.mean) / (nn - 1.0)) : 0.0;
    m.se = std::sqrt(var / nn);
    m.ci_low = m.mean - z * m.se;
    m.ci_high = m.mean + z * m.se;
    return m;
}

DriftBin time_bin(double t, const MeanEstimate& m, double target, double allowance) {
    DriftBin b;
    b.state_low = t;
    b.state_high = t;
    b.count = m.n;
    b.mean = m.mean;
    b.ci_low = m.ci_low;
    b.ci_high = m.ci_high;
    b.target = target;
    b.allowance = allowance;
    b.verdict = std::abs(m.mean - target) <= allowance ? Verdict::Pass : Verdict::Fail;
    return b;
}

} // namespace

double value_function(double x, double gamma) {
    require(!std::isnan(x) && x >= 0.0, "x must be >= 0");
    require(!std::isnan(gamma) && gamma >= 0.0, "gamma must be >= 0");
    return 1.0 / (1.0 + gamma * x);
}

ValueIdentityReport check_value_identities(double gamma, std::span<const double> xs) {
    require(!xs.empty(), "identity grid must be nonempty");
    ValueIdentityReport report{gamma, {}, Verdict::Pass};
    // 1/(1 + gamma x) continues smoothly slightly below 0, so central
    // differences are fine at x = 0 as well.
    auto p = [gamma](double x) { return 1.0 / (1.0 + gamma * x); };
    for (double x : xs) {
        const double px = value_function(x, gamma);
        const double scale = gamma > 0.0 ? x + 1.0 / gamma : 1.0;
        const double step = 1e-3 * scale;
        const double up = p(x + step);
        const double down = p(x - step);
        ValueIdentityRow row;
        row.x = x;
        row.p = px;
        row.fd_first = (up - down) / (2.0 * step);
        row.fd_second = (up - 2.0 * px + down) / (step * step);
        row.expected_first = -gamma * px * px;
        row.expected_second = 2.0 * gamma * gamma * px * px * px;
        const bool first_ok = std::abs(row.fd_first - row.expected_first) <=
                              std::max(1e-6, 1e-4 * std::abs(row.expected_first));
        const bool second_ok = std::abs(row.fd_second - row.expected_second) <=
                               std::max(1e-6, 1e-4 * std::abs(row.expected_second));
        row.pass = first_ok && second_ok;
        if (!row.pass) report.verdict = Verdict::Fail;
        report.rows.push_back(row);
    }
    return report;
}

Verdict verify_tail_upper(const TailEstimate& estimate, double gamma) {
    return estimate.ci_low <= bound_tail(gamma, estimate.level_a) ? Verdict::Pass : Verdict::Fail;
}

SweepResult verify_uniform_sweep(const JumpSampler& sampler, std::span<const double> a_grid,
                                 std::uint64_t n, const RngPolicy& policy, unsigned threads) {
    require(!a_grid.empty(), "sweep needs at least one level");
    const auto& spec = sampler.spec();
    require(spec.h().is_affine(), "uniform sweep needs an affine jump target");
    const double b = *spec.h().parameter();
    const double gamma = spec.gamma();
    const auto estimates = estimate_tails(sampler, a_grid, n, policy, threads);

    SweepResult out{{}, Verdict::Pass};
    std::vector<Verdict> verdicts;
    for (const auto& e : estimates) {
        SweepRow row{e, uniform_lower_bound(gamma, e.level_a),
                     example2_tail(spec.mu(), spec.sigma2(), b, e.level_a), Verdict::Pass};
        row.verdict = e.ci_high >= row.lower_bound ? Verdict::Pass : Verdict::Fail;
        verdicts.push_back(row.verdict);
        out.rows.push_back(row);
    }
    out.overall = combine(verdicts);
    return out;
}

ConditionalMoments exact_conditional_moments(const BigJumpSpec& spec, double t, double eta) {
    require(eta > 0.0, "eta must be > 0");
    const double y_t = depth_at_time(t, spec);
    const double y_te = depth_after(y_t, eta, spec);
    const double survival = std::exp(-cumulative_hazard(y_t, spec));
    const double no_jump = std::exp(-cumulative_hazard_between(y_t, y_te, spec));
    const double descent = -(y_te - y_t);

    // jump from depth c in (y_t, y_te]: density hazard/drift * exp(-(I(c) - I(y_t)))
    auto increment = [&](double c) {
        const double elapsed = time_between_depths(y_t, c, spec);
        return spec.h()(c) - spec.mu() * (eta - elapsed) + y_t;
    };
    auto density = [&](double c) {
        return hazard(c, spec) / drift_rate(c, spec) *
               std::exp(-cumulative_hazard_between(y_t, c, spec));
    };
    const numerics::Tolerance tol{1e-10, 1e-16, 40};
    auto m1 = numerics::adaptive_simpson_t([&](double c) { return density(c) * increment(c); },
                                           y_t, y_te, tol);
    auto m2 = numerics::adaptive_simpson_t(
        [&](double c) {
            const double d = increment(c);
            return density(c) * d * d;
        },
        y_t, y_te, tol);
    if (!m1.converged || !m2.converged)
        throw NumericalFailure("exact_conditional_moments: quadrature did not converge");
    return {survival, no_jump * descent + m1.value, no_jump * descent * descent + m2.value};
}

ContinuousDriftResult check_continuous_drift(const JumpSampler& sampler, std::span<const double> t_grid,
                                             double eta, std::uint64_t n, const RngPolicy& policy,
                                             const ContinuousDriftOptions& options, unsigned threads) {
    require(eta > 0.0 && std::isfinite(eta), "eta must be > 0");
    require(n >= 1, "n must be >= 1");
    require(!t_grid.empty(), "time grid must be nonempty");
    const auto& spec = sampler.spec();
    const double target_mean = -spec.mu() * eta;
    const double target_second = spec.sigma2() * eta;

    ContinuousDriftResult result;
    result.mean.target = "E[Y_{t+eta} - Y_t | T > t] = -mu eta + o(eta)";
    result.second_moment.target = "E[(Y_{t+eta} - Y_t)^2 | T > t] = sigma2 eta + o(eta)";

    std::vector<ConditionalMoments> exact;
    for (double t : t_grid) {
        require(t >= 0.0 && std::isfinite(t), "grid times must be finite and >= 0");
        exact.push_back(exact_conditional_moments(spec, t, eta));
        result.c_mean = std::max(result.c_mean, std::abs(exact.back().mean - target_mean) / (eta * eta));
        result.c_second =
            std::max(result.c_second, std::abs(exact.back().second - target_second) / (eta * eta));
    }

    constexpr std::uint64_t kBlock = 1u << 18;
    for (std::size_t g = 0; g < t_grid.size(); ++g) {
        const double t = t_grid[g];
        if (exact[g].survival < options.min_survival) {
            DriftBin skip;
            skip.state_low = skip.state_high = t;
            skip.target = target_mean;
            result.mean.bins.push_back(skip);
            skip.target = target_second;
            result.second_moment.bins.push_back(skip);
            continue;
        }
        const double y_t = depth_at_time(t, spec);
        const double y_te = depth_after(y_t, eta, spec);
        const double i_t = cumulative_hazard(y_t, spec);
        const double i_te = i_t + cumulative_hazard_between(y_t, y_te, spec);
        const double descent = -(y_te - y_t);
        const auto draws =
            static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) / exact[g].survival));

        MomentSums sums;
        std::uint64_t window_jumps = 0;
        std::vector<double> incr;
        std::vector<unsigned char> jumped;
        for (std::uint64_t start = 0; start < draws; start += kBlock) {
            const std::uint64_t len = std::min(kBlock, draws - start);
            incr.assign(len, std::nan(""));
            jumped.assign(len, 0);
            for_each_replicate(len, threads, [&](std::uint64_t j) {
                RandomStream rng = policy.stream(start + j);
                const double e = rng.exponential();
                if (e <= i_t) return;  // T <= t: rejected
                if (e >= i_te) {
                    incr[j] = descent;
                    return;
                }
                jumped[j] = 1;
                const double c = std::clamp(sampler.depth_for_exponential(e), y_t, y_te);
                const double elapsed = time_between_depths(y_t, c, spec);
                incr[j] = sampler.landing_level_for_depth(c) - spec.mu() * (eta - elapsed) + y_t;
            });
            MomentSums block;
            for (double d : incr) {
                if (std::isnan(d)) continue;
                const double d2 = d * d;
                ++block.n;
                block.s1 += d;
                block.s2 += d2;
                block.s4 += d2 * d2;
            }
            sums += block;
            for (unsigned char f : jumped) window_jumps += f;
        }
        const MeanEstimate mean = from_sums(sums.n, sums.s1, sums.s2, kZ95);
        const MeanEstimate second = from_sums(sums.n, sums.s2, sums.s4, kZ95);
        DriftBin mb = time_bin(t, mean, target_mean, result.c_mean * eta * eta + options.z * mean.se);
        DriftBin sb =
            time_bin(t, second, target_second, result.c_second * eta * eta + options.z * second.se);
        if (sums.n < options.min_count || window_jumps < options.min_window_jumps)
            mb.verdict = sb.verdict = Verdict::Inconclusive;
        result.mean.bins.push_back(mb);
        result.second_moment.bins.push_back(sb);
    }
    result.mean.finalize();
    result.second_moment.finalize();
    return result;
}

EqualityDiagnostics equality_diagnostics(const JumpSampler& sampler, std::uint64_t n,
                                         const RngPolicy& policy, const EqualityOptions& options,
                                         unsigned threads) {
    require(n >= 1, "n must be >= 1");
    const auto& spec = sampler.spec();
    const auto times = uniform_partition(options.horizon, options.mesh);
    const auto depths = descent_depths(spec, times);

    // prefix sums over the descent grid: squared increments and upward moves
    std::vector<double> qv_prefix(times.size(), 0.0);
    std::vector<std::uint64_t> up_prefix(times.size(), 0);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double d = depths[k - 1] - depths[k];  // Y increment
        qv_prefix[k] = qv_prefix[k - 1] + d * d;
        up_prefix[k] = up_prefix[k - 1] + (d >= 0.0 ? 1 : 0);
    }

    struct PerReplicate {
        double overshoot = 0.0;
        double qv = 0.0;
        std::uint64_t up = 0;
        bool jumped = false;
    };
    std::vector<PerReplicate> reps(n);
    const bool constant = spec.h().is_constant();
    for_each_replicate(n, threads, [&](std::uint64_t i) {
        RandomStream rng = policy.stream(i);
        const double depth = sampler.sample_depth(rng);
        PerReplicate r;
        double jump_t = kInfinity;
        if (std::isfinite(depth)) {
            r.jumped = true;
            jump_t = time_of_depth(depth, spec);
            const double level = constant ? *spec.h().parameter() : spec.h()(depth);
            r.overshoot = std::abs(sampler.landing_level_for_depth(depth) - level);
        }
        // grid points strictly before T
        const auto before =
            static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), jump_t) - times.begin());
        if (before > 0) {
            r.qv = qv_prefix[before - 1];
            r.up = up_prefix[before - 1];
        }
        reps[i] = r;
    });

    EqualityDiagnostics out;
    for (const auto& r : reps) {
        out.overshoot_max = std::max(out.overshoot_max, r.overshoot);
        out.continuous_qv_estimate = std::max(out.continuous_qv_estimate, r.qv);
        out.pre_jump_jump_count += r.up;
        out.jumps += r.jumped ? 1 : 0;
    }
    return out;
}

DriftReport check_stopped_martingale(const JumpSampler& sampler, std::span<const double> t_grid,
                                     std::uint64_t n, const RngPolicy& policy, double z,
                                     unsigned threads) {
    require(n >= 1, "n must be >= 1");
    require(std::is_sorted(t_grid.begin(), t_grid.end()), "time grid must be sorted");
    const auto& spec = sampler.spec();
    const double gamma = spec.gamma();
    const auto depths = descent_depths(spec, t_grid);

    struct Jump {
        double time = kInfinity;
        double value = 0.0;  // Y_T + gamma (Delta Y_T)^2
    };
    std::vector<Jump> jumps(n);
    for_each_replicate(n, threads, [&](std::uint64_t i) {
        RandomStream rng = policy.stream(i);
        const double depth = sampler.sample_depth(rng);
        if (!std::isfinite(depth)) return;
        const double size = sampler.jump_size_for_depth(depth);
        jumps[i] = {time_of_depth(depth, spec), sampler.landing_level_for_depth(depth) + gamma * size * size};
    });

    DriftReport report;
    report.target = "E[Y_{t^T} + gamma [Y,Y]_{t^T}] = 0";
    std::vector<double> values(n);
    for (std::size_t g = 0; g < t_grid.size(); ++g) {
        for (std::uint64_t i = 0; i < n; ++i)
            values[i] = jumps[i].time <= t_grid[g] ? jumps[i].value : -depths[g];
        const MeanEstimate m = estimate_mean(values);
        report.bins.push_back(time_bin(t_grid[g], m, 0.0, z * m.se));
    }
    report.finalize();
    return report;
}

} // namespace supmax
