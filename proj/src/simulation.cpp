#include "supmax/simulation.hpp"

#include "supmax/errors.hpp"
#include "supmax/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace supmax {

using detail::require;

JumpSampler::JumpSampler(BigJumpSpec spec, SimulationOptions options)
    : spec_(std::move(spec)), options_(options),
      total_hazard_(cumulative_hazard(kInfinity, spec_)) {}

double JumpSampler::no_jump_probability() const { return std::exp(-total_hazard_); }

double JumpSampler::depth_for_exponential(double e) const {
    // ties e == I(inf) resolve to no jump
    if (e >= total_hazard_) return kInfinity;
    return inverse_cumulative_hazard(e, spec_, total_hazard_);
}

double JumpSampler::sample_depth(RandomStream& rng) const {
    return depth_for_exponential(rng.exponential());
}

JumpDraw JumpSampler::sample_jump(RandomStream& rng) const {
    const double depth = sample_depth(rng);
    if (std::isinf(depth)) return {};
    return {ExtendedTime(time_of_depth(depth, spec_)), depth};
}

double JumpSampler::jump_size_for_depth(double depth) const {
    if (std::isinf(depth)) return 0.0;
    if (options_.flip_jump_size) return spec_.h()(depth) - depth;
    return spec_.jump_size(depth);
}

double JumpSampler::landing_level_for_depth(double depth) const {
    if (std::isinf(depth)) return 0.0;
    if (options_.flip_jump_size) return spec_.h()(depth) - 2.0 * depth;
    return spec_.h()(depth);
}

double JumpSampler::supremum_for_depth(double depth) const {
    if (std::isinf(depth)) return 0.0;
    // the path descends before the jump and after it, so Y* = max(Y_0, Y_T)
    return std::max(0.0, landing_level_for_depth(depth));
}

JumpDraw sample_jump(const BigJumpSpec& spec, RandomStream& rng) {
    return JumpSampler(spec).sample_jump(rng);
}

std::vector<double> descent_depths(const BigJumpSpec& spec, std::span<const double> times) {
    std::vector<double> out;
    out.reserve(times.size());
    double c = 0.0;
    double t_prev = 0.0;
    for (double t : times) {
        require(t >= t_prev, "descent times must be sorted and >= 0");
        c = depth_after(c, t - t_prev, spec);
        out.push_back(c);
        t_prev = t;
    }
    return out;
}

std::vector<GridSample> sample_path_at(const PathRealization& path, const BigJumpSpec& spec,
                                       std::span<const double> times) {
    require(std::is_sorted(times.begin(), times.end()), "sample times must be sorted");
    const double jump_t = path.jump_time.value();
    auto first_after = std::lower_bound(times.begin(), times.end(), jump_t);
    const auto pre = static_cast<std::size_t>(first_after - times.begin());
    const auto depths = descent_depths(spec, times.first(pre));

    std::vector<GridSample> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < pre; ++i) out.push_back({times[i], -depths[i]});
    const double landing = path.landing_level;
    for (std::size_t i = pre; i < times.size(); ++i)
        out.push_back({times[i], landing - spec.mu() * (times[i] - jump_t)});
    return out;
}

PathRealization simulate_path(const JumpSampler& sampler, RandomStream& rng,
                              std::optional<GridSpec> grid) {
    if (grid) {
        require(grid->step > 0.0 && std::isfinite(grid->step), "grid step must be > 0");
        require(grid->horizon >= 0.0 && std::isfinite(grid->horizon), "grid horizon must be >= 0");
    }
    PathRealization path;
    const JumpDraw draw = sampler.sample_jump(rng);
    if (draw.time.is_finite()) {
        path.jump_time = draw.time;
        path.depth_at_jump = draw.depth;
        path.jump_size = sampler.jump_size_for_depth(draw.depth);
        path.supremum = sampler.supremum_for_depth(draw.depth);
        path.landing_level = sampler.landing_level_for_depth(draw.depth);
    }
    if (grid) {
        path.grid = sample_path_at(path, sampler.spec(), uniform_partition(grid->horizon, grid->step));
    }
    return path;
}

std::vector<double> sample_suprema(const JumpSampler& sampler, std::uint64_t n,
                                   const RngPolicy& policy, unsigned threads) {
    std::vector<double> sups(n);
    for_each_replicate(n, threads, [&](std::uint64_t i) {
        RandomStream rng = policy.stream(i);
        sups[i] = sampler.supremum_for_depth(sampler.sample_depth(rng));
    });
    return sups;
}

TailEstimate tail_from_suprema(std::span<const double> suprema, double a,
                               std::optional<double> analytic) {
    require(!suprema.empty(), "tail estimate needs at least one replicate");
    require(a >= 0.0, "level a must be >= 0");
    const auto hits = static_cast<std::uint64_t>(
        std::count_if(suprema.begin(), suprema.end(), [a](double s) { return s >= a; }));
    return make_tail_estimate(hits, suprema.size(), a, analytic);
}

TailEstimate estimate_tail(const JumpSampler& sampler, double a, std::uint64_t n,
                           const RngPolicy& policy, unsigned threads) {
    const double level[] = {a};
    return estimate_tails(sampler, level, n, policy, threads).front();
}

std::vector<TailEstimate> estimate_tails(const JumpSampler& sampler, std::span<const double> levels,
                                         std::uint64_t n, const RngPolicy& policy,
                                         unsigned threads) {
    require(n >= 1, "n must be >= 1");
    for (double a : levels) require(a >= 0.0, "level a must be >= 0");
    const auto sups = sample_suprema(sampler, n, policy, threads);
    std::vector<TailEstimate> out;
    out.reserve(levels.size());
    for (double a : levels) out.push_back(tail_from_suprema(sups, a, analytic_tail(sampler.spec(), a)));
    return out;
}

MeanEstimate truncated_mean_from_suprema(std::span<const double> suprema, double cap) {
    require(cap > 0.0, "cap must be > 0");
    std::vector<double> capped(suprema.size());
    std::transform(suprema.begin(), suprema.end(), capped.begin(),
                   [cap](double s) { return std::min(s, cap); });
    return estimate_mean(capped);
}

MeanEstimate estimate_truncated_mean_sup(const JumpSampler& sampler, double cap, std::uint64_t n,
                                         const RngPolicy& policy, unsigned threads) {
    require(cap > 0.0, "cap must be > 0");
    require(n >= 1, "n must be >= 1");
    return truncated_mean_from_suprema(sample_suprema(sampler, n, policy, threads), cap);
}

double QvRecord::at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0.0;
    return qv[static_cast<std::size_t>(it - times.begin()) - 1];
}

QvRecord quadratic_variation(std::span<const GridSample> samples) {
    QvRecord rec;
    rec.times.reserve(samples.size());
    rec.qv.reserve(samples.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0) {
            require(samples[i].t > samples[i - 1].t, "partition must be strictly increasing");
            const double d = samples[i].y - samples[i - 1].y;
            acc += d * d;
        }
        rec.times.push_back(samples[i].t);
        rec.qv.push_back(acc);
    }
    return rec;
}

QvRecord quadratic_variation(std::span<const GridSample> samples, std::span<const double> partition) {
    std::vector<GridSample> picked;
    picked.reserve(partition.size());
    for (std::size_t i = 0; i < partition.size(); ++i) {
        require(i == 0 || partition[i] > partition[i - 1], "partition must be strictly increasing");
        auto it = std::lower_bound(samples.begin(), samples.end(), partition[i],
                                   [](const GridSample& s, double t) { return s.t < t; });
        require(it != samples.end() && it->t == partition[i],
                "partition point is not a sampled grid time");
        picked.push_back(*it);
    }
    return quadratic_variation(picked);
}

std::vector<double> uniform_partition(double horizon, double mesh) {
    require(mesh > 0.0 && std::isfinite(mesh), "mesh must be > 0");
    require(horizon >= 0.0 && std::isfinite(horizon), "horizon must be >= 0");
    const auto steps = static_cast<std::uint64_t>(std::ceil(horizon / mesh - 1e-9));
    std::vector<double> t;
    t.reserve(steps + 1);
    for (std::uint64_t k = 0; k <= steps; ++k)
        t.push_back(std::min(static_cast<double>(k) * mesh, horizon));
    return t;
}

} // namespace supmax
