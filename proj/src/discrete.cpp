#include "supmax/discrete.hpp"

#include "supmax/errors.hpp"
#include "supmax/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace supmax {

using detail::require;

namespace {

constexpr std::uint64_t kCachedSteps = 64;
constexpr int kLatticeBits = 60;

} // namespace

DiscreteConstructionParams make_discrete_params(double gamma, double a, double mu_tilde) {
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(a) && a >= 0.0, "a must be >= 0");
    require(std::isfinite(mu_tilde) && mu_tilde > 0.0, "mu_tilde must be > 0");
    const double sigma2 = mu_tilde / gamma - mu_tilde * mu_tilde;
    if (!(sigma2 > 0.0))
        throw InfeasibleParameters("mu_tilde must be below 1/gamma for a positive variance rate");
    return {gamma, a, mu_tilde, sigma2, a + mu_tilde};
}

double sampled_hit_bound(double gamma, double a, double mu_tilde) {
    return 1.0 / (1.0 + gamma / (1.0 - mu_tilde * gamma) * (mu_tilde + a));
}

double choose_mu_for_eps(double gamma, double a, double eps) {
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(a) && a >= 0.0, "a must be >= 0");
    require(eps > 0.0, "eps must be > 0");
    const double target = bound_tail(gamma, a);
    auto gap_ok = [&](double mu) { return target - sampled_hit_bound(gamma, a, mu) <= 0.5 * eps; };
    const double cap = 1.0 / (2.0 * gamma);
    if (gap_ok(cap)) return cap;
    // the gap mu (1 + a gamma) / (1 - mu gamma) times a positive factor grows with mu
    double lo = 0.0;
    double hi = cap;
    for (int i = 0; i < kLatticeBits; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gap_ok(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

SampledChain::SampledChain(const DiscreteConstructionParams& params, SimulationOptions options)
    : params_(params),
      sampler_(BigJumpSpec(params.mu_tilde, params.sigma2_tilde, JumpTargetFn::constant(params.a_tilde)),
               options) {
    std::vector<double> steps(kCachedSteps - 1);
    std::iota(steps.begin(), steps.end(), 1.0);
    cached_depths_.push_back(0.0);
    const auto d = descent_depths(sampler_.spec(), steps);
    cached_depths_.insert(cached_depths_.end(), d.begin(), d.end());
}

ChainRealization SampledChain::simulate(RandomStream& rng, const ChainOptions& options) const {
    ChainRealization out;
    const JumpDraw draw = sampler_.sample_jump(rng);
    const bool finite = draw.time.is_finite();
    const double jump_t = draw.time.value();
    std::uint64_t last = options.horizon;
    if (finite) {
        const auto step = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(jump_t)));
        out.jump_step = step;
        out.jump_time = draw.time;
        last = std::max(last, step);
        out.complete = step <= options.max_steps;
    }
    last = std::min(last, options.max_steps);

    const double landing = sampler_.landing_level_for_depth(draw.depth);
    out.values.reserve(last + 1);
    out.values.push_back(0.0);
    double depth = 0.0;
    for (std::uint64_t k = 1; k <= last; ++k) {
        if (finite && k >= *out.jump_step) {
            out.values.push_back(landing - params_.mu_tilde * (static_cast<double>(k) - jump_t));
            continue;
        }
        depth = k < cached_depths_.size() ? cached_depths_[k] : depth_after(depth, 1.0, sampler_.spec());
        out.values.push_back(-depth);
    }
    out.hit = finite || params_.a <= 0.0;
    return out;
}

bool SampledChain::sample_hit(RandomStream& rng) const {
    return std::isfinite(sampler_.sample_depth(rng)) || params_.a <= 0.0;
}

ChainRealization simulate_sampled_chain(const DiscreteConstructionParams& params, RandomStream& rng,
                                        const ChainOptions& options) {
    return SampledChain(params).simulate(rng, options);
}

TailEstimate estimate_chain_hit(const SampledChain& chain, std::uint64_t n, const RngPolicy& policy,
                                unsigned threads) {
    require(n >= 1, "n must be >= 1");
    std::vector<char> hits(n);
    for_each_replicate(n, threads, [&](std::uint64_t i) {
        RandomStream rng = policy.stream(i);
        hits[i] = chain.sample_hit(rng) ? 1 : 0;
    });
    const auto count = static_cast<std::uint64_t>(std::count(hits.begin(), hits.end(), 1));
    return make_tail_estimate(count, n, chain.params().a, chain.params().hit_probability());
}

DriftReport check_discrete_condition(const ChainSampler& sampler, double gamma, std::uint64_t n,
                                     const RngPolicy& policy, const DiscreteCheckOptions& options,
                                     unsigned threads) {
    require(gamma >= 0.0, "gamma must be >= 0");
    require(n >= 1, "n must be >= 1");
    require(options.bins >= 1, "need at least one bin");
    std::vector<std::vector<double>> chains(n);
    for_each_replicate(n, threads, [&](std::uint64_t i) {
        RandomStream rng = policy.stream(i);
        chains[i] = sampler(rng);
    });

    struct Transition {
        double state;
        double score;  // U + gamma U^2
    };
    std::vector<Transition> moves;
    for (const auto& c : chains) {
        for (std::size_t k = 1; k < c.size(); ++k) {
            const double u = c[k] - c[k - 1];
            moves.push_back({c[k - 1], u + gamma * u * u});
        }
    }
    std::stable_sort(moves.begin(), moves.end(),
                     [](const Transition& x, const Transition& y) { return x.state < y.state; });

    DriftReport report;
    report.target = "E[U_k + gamma U_k^2 | S_{k-1}] <= 0";
    const std::size_t total = moves.size();
    const std::size_t per_bin = (total + options.bins - 1) / options.bins;
    std::size_t start = 0;
    while (start < total) {
        std::size_t end = std::min(total, start + per_bin);
        while (end < total && moves[end].state == moves[end - 1].state) ++end;
        std::vector<double> scores;
        scores.reserve(end - start);
        for (std::size_t i = start; i < end; ++i) scores.push_back(moves[i].score);
        const MeanEstimate m = estimate_mean(scores, options.z);
        DriftBin bin;
        bin.state_low = moves[start].state;
        bin.state_high = moves[end - 1].state;
        bin.count = m.n;
        bin.mean = m.mean;
        bin.ci_low = m.ci_low;
        bin.ci_high = m.ci_high;
        bin.target = 0.0;
        bin.allowance = options.z * m.se;
        if (m.n < options.min_count) {
            bin.verdict = Verdict::Inconclusive;
        } else {
            bin.verdict = m.ci_low > 0.0 ? Verdict::Fail : Verdict::Pass;
        }
        report.bins.push_back(bin);
        start = end;
    }
    report.finalize();
    return report;
}

RandomWalkSupResult random_walk_sup(double p_up, std::uint64_t steps_cap, std::uint64_t n,
                                    const RngPolicy& policy, unsigned threads) {
    require(p_up >= 0.0 && p_up < 0.5, "p_up must lie in [0, 1/2)");
    require(n >= 1, "n must be >= 1");
    require(steps_cap >= 1, "steps_cap must be >= 1");
    const double drift = 1.0 - 2.0 * p_up;
    const double stop = 50.0 / drift;
    std::vector<double> sups(n);
    std::vector<char> cut(n);
    for_each_replicate(n, threads, [&](std::uint64_t i) {
        RandomStream rng = policy.stream(i);
        long long s = 0;
        long long best = 0;
        std::uint64_t steps = 0;
        while (static_cast<double>(best - s) < stop && steps < steps_cap) {
            s += rng.uniform() < p_up ? 1 : -1;
            best = std::max(best, s);
            ++steps;
        }
        sups[i] = static_cast<double>(best);
        cut[i] = static_cast<double>(best - s) < stop ? 1 : 0;
    });
    RandomWalkSupResult r;
    r.mean_sup = estimate_mean(sups);
    r.gamma_implied = drift;
    r.kingman_bound = 1.0 / (2.0 * drift);
    r.drawdown_stop = stop;
    r.truncated = static_cast<std::uint64_t>(std::count(cut.begin(), cut.end(), 1));
    return r;
}

} // namespace supmax
