#include "supmax/construction.hpp"

#include "supmax/errors.hpp"
#include "supmax/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace supmax {

using detail::require;

namespace {

constexpr numerics::Tolerance kQuadTol{1e-10, 1e-14, 60};
constexpr int kBisectionCap = 200;
constexpr double kBisectionRelTol = 1e-12;

void require_nonnegative(double x, const char* name) {
    require(!std::isnan(x) && x >= 0.0, std::string(name) + " must be >= 0");
}

void require_positive(double x, const char* name) {
    require(std::isfinite(x) && x > 0.0, std::string(name) + " must be finite and > 0");
}

double checked(const numerics::QuadratureResult& r, const char* what, double lo, double hi) {
    if (!r.converged || !std::isfinite(r.value)) {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge on [" << lo << ", " << hi
            << "], value " << r.value << ", error estimate " << r.error_estimate << " after "
            << r.evaluations << " evaluations";
        throw NumericalFailure(msg.str());
    }
    return r.value;
}

// 1 / drift_rate in the depth variable.
struct InverseDrift {
    const BigJumpSpec& s;
    double operator()(double y) const {
        const double j = s.jump_size(y);
        return j / (s.mu() * j + s.sigma2());
    }
};

// hazard / drift_rate after y = u / (1 - u), times dy/du = 1 / (1 - u)^2.
// With w = 1 - u and jw = w (y + h(y)) = u + w h(y) the integrand is
// sigma2 / (jw (mu jw + sigma2 w)), finite on all of [0, 1].
struct HazardInU {
    const BigJumpSpec& s;
    double operator()(double u) const {
        const double w = 1.0 - u;
        double jw;
        if (w <= 0.0) {
            jw = 1.0 + s.h().asymptotic_slope();
        } else {
            jw = u + w * s.h()(u / w);
        }
        return s.sigma2() / (jw * (s.mu() * jw + s.sigma2() * w));
    }
};

double to_u(double c) { return std::isinf(c) ? 1.0 : c / (1.0 + c); }
double from_u(double u) { return u >= 1.0 ? kInfinity : u / (1.0 - u); }

std::vector<double> kinks_in_u(const BigJumpSpec& s) {
    std::vector<double> out = s.h().kinks();
    for (double& k : out) k = to_u(k);
    return out;
}

double hazard_u_between(double u0, double u1, const BigJumpSpec& s,
                        const std::vector<double>& kinks_u) {
    auto r = numerics::adaptive_simpson_split_t(HazardInU{s}, u0, u1, kinks_u, kQuadTol);
    return checked(r, "cumulative_hazard", u0, u1);
}

double time_between_checked(double c0, double c1, const BigJumpSpec& s,
                            const std::vector<double>& kinks) {
    auto r = numerics::adaptive_simpson_split_t(InverseDrift{s}, c0, c1, kinks, kQuadTol);
    return checked(r, "time_of_depth", c0, c1);
}

// Solves time(lo .. c) = target for c in [lo, hi] given t_lo = time(c_start .. lo),
// by bisection with incremental integration.
double bisect_time(double lo, double hi, double t_lo, double target, const BigJumpSpec& s,
                   const std::vector<double>& kinks, const char* what) {
    for (int it = 0; it < kBisectionCap; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (hi - lo <= kBisectionRelTol * hi || mid <= lo || mid >= hi)
            return lo + 0.5 * (hi - lo);
        const double t_mid = t_lo + time_between_checked(lo, mid, s, kinks);
        if (t_mid < target) {
            lo = mid;
            t_lo = t_mid;
        } else {
            hi = mid;
        }
    }
    std::ostringstream msg;
    msg << what << ": bisection did not reach tolerance in " << kBisectionCap
        << " iterations, bracket [" << lo << ", " << hi << "]";
    throw NumericalFailure(msg.str());
}

} // namespace

BigJumpSpec::BigJumpSpec(double mu, double sigma2, JumpTargetFn h)
    : mu_(mu), sigma2_(sigma2), h_(std::move(h)) {
    require_positive(mu, "mu");
    require_positive(sigma2, "sigma2");
    if (!(h_(0.0) > 0.0))
        throw DegenerateConstruction("y + h(y) = 0 at y = 0: drift and hazard are undefined");
}

ExtendedTime::ExtendedTime(double t) : finite_(true), t_(t) {
    require(std::isfinite(t) && t >= 0.0, "finite time must be >= 0");
}

double bound_tail(double gamma, double a) {
    require_nonnegative(gamma, "gamma");
    require_nonnegative(a, "a");
    return 1.0 / (1.0 + gamma * a);
}

double uniform_lower_bound(double gamma, double a) {
    require_nonnegative(gamma, "gamma");
    require_nonnegative(a, "a");
    return 1.0 / (5.0 * (1.0 + a * gamma));
}

KingmanBounds kingman_bounds(double gamma, double a) {
    require_positive(gamma, "gamma");
    require_positive(a, "a");
    return {1.0 / (2.0 * gamma), std::min(1.0, 1.0 / (2.0 * a * gamma))};
}

double drift_rate(double y, const BigJumpSpec& spec) {
    require_nonnegative(y, "depth");
    const double j = spec.jump_size(y);
    if (!(j > 0.0)) throw DegenerateConstruction("y + h(y) = 0");
    return spec.mu() + spec.sigma2() / j;
}

double hazard(double y, const BigJumpSpec& spec) {
    require_nonnegative(y, "depth");
    const double j = spec.jump_size(y);
    if (!(j > 0.0)) throw DegenerateConstruction("y + h(y) = 0");
    return spec.sigma2() / (j * j);
}

double time_between_depths(double c0, double c1, const BigJumpSpec& spec) {
    require_nonnegative(c0, "depth");
    require(c1 >= c0, "time_between_depths needs c0 <= c1");
    if (std::isinf(c1)) return kInfinity;
    return time_between_checked(c0, c1, spec, spec.h().kinks());
}

double time_of_depth(double c, const BigJumpSpec& spec) {
    return time_between_depths(0.0, c, spec);
}

double depth_at_time(double t, const BigJumpSpec& spec) {
    require(std::isfinite(t) && t >= 0.0, "time must be finite and >= 0");
    if (t == 0.0) return 0.0;
    const auto kinks = spec.h().kinks();
    double lo = 0.0;
    double t_lo = 0.0;
    double hi = 1.0;
    double t_hi = time_between_checked(lo, hi, spec, kinks);
    while (t_hi < t) {
        lo = hi;
        t_lo = t_hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw NumericalFailure("depth_at_time: bracket overflow");
        t_hi = t_lo + time_between_checked(lo, hi, spec, kinks);
    }
    return bisect_time(lo, hi, t_lo, t, spec, kinks, "depth_at_time");
}

double depth_after(double c0, double dt, const BigJumpSpec& spec) {
    require_nonnegative(c0, "depth");
    require(std::isfinite(dt) && dt >= 0.0, "time step must be finite and >= 0");
    if (dt == 0.0) return c0;
    const auto kinks = spec.h().kinks();
    // drift is nonincreasing in depth and bounded below by mu
    const double lo = c0 + spec.mu() * dt;
    const double hi = c0 + drift_rate(c0, spec) * dt;
    if (!(hi > lo)) return lo;
    const double t_lo = time_between_checked(c0, lo, spec, kinks);
    return bisect_time(lo, hi, t_lo, dt, spec, kinks, "depth_after");
}

double cumulative_hazard_between(double c0, double c1, const BigJumpSpec& spec) {
    require_nonnegative(c0, "depth");
    require(c1 >= c0, "cumulative_hazard_between needs c0 <= c1");
    if (c1 == c0) return 0.0;
    return hazard_u_between(to_u(c0), to_u(c1), spec, kinks_in_u(spec));
}

double cumulative_hazard(double c, const BigJumpSpec& spec) {
    return cumulative_hazard_between(0.0, c, spec);
}

double inverse_cumulative_hazard(double target, const BigJumpSpec& spec, double total) {
    require_nonnegative(target, "cumulative hazard level");
    if (std::isnan(total)) total = cumulative_hazard(kInfinity, spec);
    if (target >= total) return kInfinity;
    if (target == 0.0) return 0.0;

    const auto kinks_u = kinks_in_u(spec);
    double lo = 0.0;
    double hi = 1.0;
    double i_lo = 0.0;
    for (int it = 0; it < kBisectionCap; ++it) {
        const double c_lo = from_u(lo);
        const double c_hi = from_u(hi);
        const double mid = lo + 0.5 * (hi - lo);
        const bool narrow = std::isfinite(c_hi) && c_hi - c_lo <= kBisectionRelTol * c_hi;
        if (narrow || mid <= lo || mid >= hi) return from_u(lo + 0.5 * (hi - lo));
        const double i_mid = i_lo + hazard_u_between(lo, mid, spec, kinks_u);
        if (i_mid < target) {
            lo = mid;
            i_lo = i_mid;
        } else {
            hi = mid;
        }
    }
    std::ostringstream msg;
    msg << "inverse_cumulative_hazard: no convergence for level " << target << ", u-bracket ["
        << lo << ", " << hi << "]";
    throw NumericalFailure(msg.str());
}

namespace closed_form {

double cumulative_hazard_constant(double mu, double sigma2, double a, double c) {
    if (std::isinf(c)) return std::log1p(sigma2 / (mu * a));
    return std::log1p(c / a) - std::log1p(mu * c / (mu * a + sigma2));
}

double cumulative_hazard_affine(double mu, double sigma2, double b, double c) {
    if (std::isinf(c)) return 0.5 * std::log1p(sigma2 / (mu * b));
    return 0.5 * (std::log1p(2.0 * c / b) - std::log1p(2.0 * mu * c / (mu * b + sigma2)));
}

} // namespace closed_form

double analytic_tail(const BigJumpSpec& spec, double level) {
    require_nonnegative(level, "level");
    if (level == 0.0) return 1.0;
    const auto c = spec.h().first_reach(level);
    if (!c) return 0.0;
    const auto& h = spec.h();
    double i_c;
    double i_inf;
    if (h.is_constant()) {
        i_c = closed_form::cumulative_hazard_constant(spec.mu(), spec.sigma2(), *h.parameter(), *c);
        i_inf = closed_form::cumulative_hazard_constant(spec.mu(), spec.sigma2(), *h.parameter(),
                                                        kInfinity);
    } else if (h.is_affine()) {
        i_c = closed_form::cumulative_hazard_affine(spec.mu(), spec.sigma2(), *h.parameter(), *c);
        i_inf = closed_form::cumulative_hazard_affine(spec.mu(), spec.sigma2(), *h.parameter(),
                                                      kInfinity);
    } else {
        i_inf = cumulative_hazard(kInfinity, spec);
        i_c = cumulative_hazard(*c, spec);
    }
    return std::max(0.0, std::exp(-i_c) - std::exp(-i_inf));
}

double example1_tail(double mu, double sigma2, double a) {
    require_positive(mu, "mu");
    require_positive(sigma2, "sigma2");
    return bound_tail(mu / sigma2, a);
}

double example2_tail(double mu, double sigma2, double b, double a) {
    require_positive(mu, "mu");
    require_positive(sigma2, "sigma2");
    require_positive(b, "b");
    require_nonnegative(a, "a");
    const double root = std::sqrt(mu * b / (mu * b + sigma2));
    if (a <= b) return 1.0 - root;
    if (std::isinf(a)) return 0.0;
    return root * (std::sqrt(1.0 + sigma2 / (mu * (2.0 * a - b))) - 1.0);
}

double example2_b_star(double mu, double sigma2) {
    require_positive(mu, "mu");
    require_positive(sigma2, "sigma2");
    return 16.0 * sigma2 / (9.0 * mu);
}

double ClosedFormTail::operator()(double level) const {
    require_nonnegative(level, "level");
    if (family == Family::Example1) {
        if (level > param) return 0.0;
        return example1_tail(mu, sigma2, param);
    }
    return example2_tail(mu, sigma2, param, level);
}

} // namespace supmax
