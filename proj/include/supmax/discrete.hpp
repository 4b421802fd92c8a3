#pragma once

#include "supmax/simulation.hpp"
#include "supmax/verdict.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace supmax {

/// Continuous-time Example-1 parameters whose integer samples nearly attain
/// the discrete-time bound at (gamma, a).
struct DiscreteConstructionParams {
    double gamma;
    double a;
    double mu_tilde;
    double sigma2_tilde;  // mu_tilde / gamma - mu_tilde^2
    double a_tilde;       // a + mu_tilde

    double gamma_tilde() const { return mu_tilde / sigma2_tilde; }
    /// P{Y* >= a_tilde} = 1 / (1 + gamma_tilde a_tilde) for the continuous process.
    double hit_probability() const { return 1.0 / (1.0 + gamma_tilde() * a_tilde); }
};

/// Throws InfeasibleParameters when mu_tilde >= 1 / gamma (no positive variance).
DiscreteConstructionParams make_discrete_params(double gamma, double a, double mu_tilde);

/// 1 / (1 + [gamma / (1 - mu_tilde gamma)] (mu_tilde + a)), the hit probability
/// written in terms of gamma and mu_tilde.
double sampled_hit_bound(double gamma, double a, double mu_tilde);

/// Largest mu_tilde on a dyadic lattice of (0, 1/(2 gamma)] whose bound gap
/// bound_tail(gamma, a) - sampled_hit_bound(...) is at most eps / 2.
double choose_mu_for_eps(double gamma, double a, double eps);

struct ChainRealization {
    std::vector<double> values;  // S_0 = 0, S_1, ...
    bool hit = false;
    std::optional<std::uint64_t> jump_step;  // first k with k >= T
    ExtendedTime jump_time = ExtendedTime::infinite();
    /// False if max_steps cut the chain before jump_step.
    bool complete = true;
};

struct ChainOptions {
    /// Steps emitted when no jump happens, and the minimum length otherwise.
    std::uint64_t horizon = 16;
    std::uint64_t max_steps = std::numeric_limits<std::uint64_t>::max();
};

/// The Example-1 process with (mu_tilde, sigma2_tilde, h = a_tilde), sampled
/// at integer times. Caches the descent at the first few integers.
class SampledChain {
public:
    explicit SampledChain(const DiscreteConstructionParams& params, SimulationOptions options = {});

    const DiscreteConstructionParams& params() const { return params_; }
    const JumpSampler& sampler() const { return sampler_; }

    ChainRealization simulate(RandomStream& rng, const ChainOptions& options = {}) const;

    /// S* >= a without building the path: the jump is finite, or a = 0.
    bool sample_hit(RandomStream& rng) const;

private:
    double depth_at_step(std::uint64_t k, std::vector<double>& scratch) const;

    DiscreteConstructionParams params_;
    JumpSampler sampler_;
    std::vector<double> cached_depths_;  // y(k) for k = 0 .. cache size - 1
};

ChainRealization simulate_sampled_chain(const DiscreteConstructionParams& params, RandomStream& rng,
                                        const ChainOptions& options = {});

/// Hit frequency of S* >= a over n replicates.
TailEstimate estimate_chain_hit(const SampledChain& chain, std::uint64_t n, const RngPolicy& policy,
                                unsigned threads = 0);

using ChainSampler = std::function<std::vector<double>(RandomStream&)>;

struct DiscreteCheckOptions {
    std::size_t bins = 16;
    std::uint64_t min_count = 30;
    double z = kZ95;
};

/// Bins the transitions (S_{k-1}, U_k) of n sampled chains by S_{k-1}
/// (equal-count bins, ties kept together) and estimates
/// E[U_k + gamma U_k^2 | bin]. A bin fails when its interval lies above 0.
DriftReport check_discrete_condition(const ChainSampler& sampler, double gamma, std::uint64_t n,
                                     const RngPolicy& policy, const DiscreteCheckOptions& options = {},
                                     unsigned threads = 0);

struct RandomWalkSupResult {
    MeanEstimate mean_sup;
    double gamma_implied;   // (1 - 2 p_up) / 1
    double kingman_bound;   // 1 / (2 gamma_implied)
    double drawdown_stop;   // 50 / (1 - 2 p_up)
    std::uint64_t truncated;  // replicates stopped by steps_cap
};

/// E[S*] of the +-1 walk with up-probability p_up < 1/2. A replicate stops once
/// it sits drawdown_stop below its running maximum, or after steps_cap steps.
RandomWalkSupResult random_walk_sup(double p_up, std::uint64_t steps_cap, std::uint64_t n,
                                    const RngPolicy& policy, unsigned threads = 0);

} // namespace supmax
