#pragma once

#include "supmax/simulation.hpp"
#include "supmax/verdict.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace supmax {

/// p(x) = 1 / (1 + gamma x): the bound on reaching 0 from x for the
/// upward-drifting mirror process X = a - Y.
double value_function(double x, double gamma);

struct ValueIdentityRow {
    double x;
    double p;
    double fd_first;
    double expected_first;   // -gamma p^2
    double fd_second;
    double expected_second;  // 2 gamma^2 p^3
    bool pass;
};

struct ValueIdentityReport {
    double gamma;
    std::vector<ValueIdentityRow> rows;
    Verdict verdict;
};

/// Central differences of value_function against -gamma p^2 and
/// 2 gamma^2 p^3, tolerance max(1e-6, 1e-4 |expected|).
ValueIdentityReport check_value_identities(double gamma, std::span<const double> xs);

/// Pass unless the whole interval lies above 1 / (1 + gamma a).
Verdict verify_tail_upper(const TailEstimate& estimate, double gamma);

struct SweepRow {
    TailEstimate estimate;
    double lower_bound;  // 1 / (5 (1 + a gamma))
    double analytic;     // example2_tail
    Verdict verdict;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    Verdict overall;
};

/// For an Affine jump target: each level passes when ci_high >= the uniform
/// lower bound. All levels share one set of replicates.
SweepResult verify_uniform_sweep(const JumpSampler& sampler, std::span<const double> a_grid,
                                 std::uint64_t n, const RngPolicy& policy, unsigned threads = 0);

struct ContinuousDriftOptions {
    double z = 3.0;
    double min_survival = 0.01;
    std::uint64_t min_count = 30;
    /// Bins with fewer jumps inside the window are INCONCLUSIVE: the normal
    /// interval is meaningless when the increment law is barely sampled.
    std::uint64_t min_window_jumps = 30;
};

/// Conditional increments over [t, t + eta] given T > t, against the first-order
/// rates -mu eta (mean) and sigma2 eta (second moment). The allowance is
/// C eta^2 + z se, where C is the largest second-order remainder over the grid,
/// obtained from the exact conditional moments along the descent.
struct ContinuousDriftResult {
    DriftReport mean;
    DriftReport second_moment;
    double c_mean = 0.0;
    double c_second = 0.0;
};

ContinuousDriftResult check_continuous_drift(const JumpSampler& sampler, std::span<const double> t_grid,
                                             double eta, std::uint64_t n, const RngPolicy& policy,
                                             const ContinuousDriftOptions& options = {},
                                             unsigned threads = 0);

/// Exact E[(Y_{t+eta} - Y_t)^k | T > t] for k = 1, 2 by quadrature over the
/// jump depth in the window.
struct ConditionalMoments {
    double survival;  // P{T > t}
    double mean;
    double second;
};
ConditionalMoments exact_conditional_moments(const BigJumpSpec& spec, double t, double eta);

struct EqualityDiagnostics {
    double overshoot_max = 0.0;               // max |Y_T - target level| over jumps
    std::uint64_t pre_jump_jump_count = 0;    // nonnegative grid increments before T
    double continuous_qv_estimate = 0.0;      // max QV of the path on [0, min(T, horizon))
    std::uint64_t jumps = 0;
};

struct EqualityOptions {
    double mesh = 1e-3;
    double horizon = 1.0;
};

/// Target level is a for Constant(a) and h(depth) otherwise.
EqualityDiagnostics equality_diagnostics(const JumpSampler& sampler, std::uint64_t n,
                                         const RngPolicy& policy, const EqualityOptions& options = {},
                                         unsigned threads = 0);

/// E[Y_{t^T} + gamma [Y,Y]_{t^T}] at each grid time should stay at its
/// initial value 0; a time fails when |mean| > z se.
DriftReport check_stopped_martingale(const JumpSampler& sampler, std::span<const double> t_grid,
                                     std::uint64_t n, const RngPolicy& policy, double z = 3.0,
                                     unsigned threads = 0);

} // namespace supmax
