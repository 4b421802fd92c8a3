#pragma once

#include "supmax/jump_target.hpp"

#include <limits>
#include <vector>

// Deterministic side of the big-jump construction: the descent y(t) solving
// y' = mu + sigma2 / (y + h(y)), the jump hazard along it, and closed-form
// tails for the constant and affine jump targets.

namespace supmax {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Parameters of one big-jump process. gamma = mu / sigma2 is derived.
class BigJumpSpec {
public:
    /// Throws InfeasibleParameters for nonpositive rates and
    /// DegenerateConstruction when y + h(y) vanishes at y = 0.
    BigJumpSpec(double mu, double sigma2, JumpTargetFn h);

    double mu() const { return mu_; }
    double sigma2() const { return sigma2_; }
    double gamma() const { return mu_ / sigma2_; }
    const JumpTargetFn& h() const { return h_; }

    /// y + h(y): the jump size from depth y.
    double jump_size(double y) const { return y + h_(y); }

private:
    double mu_;
    double sigma2_;
    JumpTargetFn h_;
};

/// A nonnegative time or +infinity.
class ExtendedTime {
public:
    static ExtendedTime infinite() { return ExtendedTime(); }
    explicit ExtendedTime(double t);

    bool is_finite() const { return finite_; }
    /// +inf when not finite.
    double value() const { return finite_ ? t_ : kInfinity; }

    friend bool operator==(const ExtendedTime&, const ExtendedTime&) = default;

private:
    ExtendedTime() = default;
    bool finite_ = false;
    double t_ = 0.0;
};

// ---- analytic bounds ---------------------------------------------------------

/// 1 / (1 + gamma a): the tight upper bound on P{Y* >= a}.
double bound_tail(double gamma, double a);

/// 1 / (5 (1 + a gamma)): attained uniformly in a by the affine construction.
double uniform_lower_bound(double gamma, double a);

struct KingmanBounds {
    double mean_bound;  // 1 / (2 gamma)
    double tail_bound;  // min(1, 1 / (2 a gamma))
};
KingmanBounds kingman_bounds(double gamma, double a);

// ---- descent and hazard --------------------------------------------------------

double drift_rate(double y, const BigJumpSpec& spec);
double hazard(double y, const BigJumpSpec& spec);

/// t(c) = integral_0^c dz / drift_rate(z); +inf for c = +inf.
double time_of_depth(double c, const BigJumpSpec& spec);
/// t(c1) - t(c0) for c0 <= c1.
double time_between_depths(double c0, double c1, const BigJumpSpec& spec);

/// y(t): inverse of time_of_depth by bisection.
double depth_at_time(double t, const BigJumpSpec& spec);
/// y(t0 + dt) given c0 = y(t0). Bracketed by [c0 + mu dt, c0 + drift_rate(c0) dt].
double depth_after(double c0, double dt, const BigJumpSpec& spec);

/// I(c) = integral_0^c hazard(y) / drift_rate(y) dy, c may be +inf.
double cumulative_hazard(double c, const BigJumpSpec& spec);
double cumulative_hazard_between(double c0, double c1, const BigJumpSpec& spec);

/// Depth c with I(c) = target; +inf when target >= I(inf). `total` may pass
/// a precomputed I(inf).
double inverse_cumulative_hazard(double target, const BigJumpSpec& spec,
                                 double total = std::numeric_limits<double>::quiet_NaN());

/// P{Y* >= level} for any jump target: exp(-I(c)) - exp(-I(inf)) with c the
/// first depth where h reaches the level. Closed forms for Constant and
/// Affine, quadrature otherwise. Equals 1 at level 0 (Y starts at 0).
double analytic_tail(const BigJumpSpec& spec, double level);

// ---- closed forms -----------------------------------------------------------------

/// 1 / (1 + a mu / sigma2): Constant(a) hits level a with the bound's probability.
double example1_tail(double mu, double sigma2, double a);

/// Tail of the Affine(b) process. The 0 < a <= b branch is also used at a = 0.
double example2_tail(double mu, double sigma2, double b, double a);

/// 16 sigma2 / (9 mu): makes the affine tail equal 1/5 on [0, b].
double example2_b_star(double mu, double sigma2);

namespace closed_form {
double cumulative_hazard_constant(double mu, double sigma2, double a, double c);
double cumulative_hazard_affine(double mu, double sigma2, double b, double c);
} // namespace closed_form

/// Closed-form tail as a function of the level. Nonincreasing, in [0, 1].
struct ClosedFormTail {
    enum class Family { Example1, Example2 };
    Family family;
    double mu;
    double sigma2;
    double param;  // a (Example1) or b (Example2)

    /// Level 0 takes the value of the first positive branch.
    double operator()(double level) const;
};

} // namespace supmax
