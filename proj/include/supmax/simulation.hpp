#pragma once

#include "supmax/construction.hpp"
#include "supmax/rng.hpp"
#include "supmax/stats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace supmax {

struct GridSpec {
    double horizon;
    double step;
};

struct GridSample {
    double t;
    double y;
};

/// One trajectory. When no jump occurs: jump_time infinite, depth_at_jump
/// and jump_size 0, supremum 0.
struct PathRealization {
    ExtendedTime jump_time = ExtendedTime::infinite();
    double depth_at_jump = 0.0;
    double jump_size = 0.0;
    double supremum = 0.0;
    /// Y_T = h(y(T)), the level right after the jump (0 when no jump).
    double landing_level = 0.0;
    std::vector<GridSample> grid;

    bool jumped() const { return jump_time.is_finite(); }
};

struct JumpDraw {
    ExtendedTime time = ExtendedTime::infinite();
    double depth = kInfinity;  // +inf when no jump
};

struct SimulationOptions {
    /// Negative control for the verification suite: replaces the jump size
    /// y + h(y) by h(y) - y.
    bool flip_jump_size = false;
};

/// Exact sampler of the jump: E ~ Exp(1) is mapped to the depth c with
/// I(c) = E, or to "no jump" when E >= I(inf). Caches I(inf).
class JumpSampler {
public:
    explicit JumpSampler(BigJumpSpec spec, SimulationOptions options = {});

    const BigJumpSpec& spec() const { return spec_; }
    const SimulationOptions& options() const { return options_; }
    double total_hazard() const { return total_hazard_; }
    /// P{T = inf} = exp(-I(inf)).
    double no_jump_probability() const;

    /// Jump depth for a given exponential draw; +inf for no jump.
    double depth_for_exponential(double e) const;
    /// Consumes exactly one draw from the stream.
    double sample_depth(RandomStream& rng) const;
    JumpDraw sample_jump(RandomStream& rng) const;

    double jump_size_for_depth(double depth) const;
    /// Y_T for a jump from the given depth, computed as h(depth) rather than
    /// as jump size minus depth.
    double landing_level_for_depth(double depth) const;
    /// Exact supremum given the jump depth (+inf = no jump).
    double supremum_for_depth(double depth) const;

private:
    BigJumpSpec spec_;
    SimulationOptions options_;
    double total_hazard_;
};

JumpDraw sample_jump(const BigJumpSpec& spec, RandomStream& rng);

/// Draws the jump and, if requested, fills grid samples at 0, step, 2 step, ...
/// up to the horizon. The supremum never depends on the grid.
PathRealization simulate_path(const JumpSampler& sampler, RandomStream& rng,
                              std::optional<GridSpec> grid = std::nullopt);

/// Path values at sorted times; Y_t = -y(t) before the jump and
/// Y_T - mu (t - T) from the jump on.
std::vector<GridSample> sample_path_at(const PathRealization& path, const BigJumpSpec& spec,
                                       std::span<const double> times);

/// Depths y(t_k) along sorted times, computed by stepping the descent.
std::vector<double> descent_depths(const BigJumpSpec& spec, std::span<const double> times);

// ---- Monte Carlo estimators -------------------------------------------------------

/// Exact suprema of n replicates; replicate i uses policy.stream(i).
std::vector<double> sample_suprema(const JumpSampler& sampler, std::uint64_t n,
                                   const RngPolicy& policy, unsigned threads = 0);

TailEstimate estimate_tail(const JumpSampler& sampler, double a, std::uint64_t n,
                           const RngPolicy& policy, unsigned threads = 0);

/// Several levels from one set of replicates.
std::vector<TailEstimate> estimate_tails(const JumpSampler& sampler, std::span<const double> levels,
                                         std::uint64_t n, const RngPolicy& policy,
                                         unsigned threads = 0);

/// Tail estimates over an existing sample of suprema.
TailEstimate tail_from_suprema(std::span<const double> suprema, double a,
                               std::optional<double> analytic = std::nullopt);

/// Mean of min(Y*, cap) with a normal interval.
MeanEstimate estimate_truncated_mean_sup(const JumpSampler& sampler, double cap, std::uint64_t n,
                                         const RngPolicy& policy, unsigned threads = 0);
MeanEstimate truncated_mean_from_suprema(std::span<const double> suprema, double cap);

// ---- quadratic variation ----------------------------------------------------------

/// Running sum of squared increments: qv[k] is the sum over the first k
/// increments, so qv[0] = 0 at times[0].
struct QvRecord {
    std::vector<double> times;
    std::vector<double> qv;

    /// Step-function value at t (0 before the first time).
    double at(double t) const;
    double total() const { return qv.empty() ? 0.0 : qv.back(); }
};

/// Partition = the sample times themselves. Throws on unsorted times.
QvRecord quadratic_variation(std::span<const GridSample> samples);

/// Partition points must be sorted and each must coincide with a sample time.
QvRecord quadratic_variation(std::span<const GridSample> samples, std::span<const double> partition);

/// Uniform partition 0, mesh, ..., horizon (the last point snapped to horizon).
std::vector<double> uniform_partition(double horizon, double mesh);

} // namespace supmax
