#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

namespace supmax::numerics {

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    int max_depth = 60;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;

    QuadratureResult& operator+=(const QuadratureResult& other) {
        value += other.value;
        error_estimate += other.error_estimate;
        evaluations += other.evaluations;
        converged = converged && other.converged;
        return *this;
    }
};

namespace detail {

template <class F>
struct SimpsonState {
    const F& f;
    double rel;
    int max_depth;
    QuadratureResult out;

    // whole = Simpson estimate on [a, b] with fa, fm, fb at a, (a+b)/2, b.
    void recurse(double a, double b, double fa, double fm, double fb, double whole,
                 double abs_tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        out.evaluations += 2;
        const double h = b - a;
        const double left = h / 12.0 * (fa + 4.0 * flm + fm);
        const double right = h / 12.0 * (fm + 4.0 * frm + fb);
        const double refined = left + right;
        const double delta = refined - whole;
        const double allowed = std::max(abs_tol, rel * std::abs(refined));
        if (std::abs(delta) <= 15.0 * allowed || depth >= max_depth || !(h > 0.0) ||
            m <= a || m >= b) {
            if (std::abs(delta) > 15.0 * allowed && depth >= max_depth) out.converged = false;
            out.value += refined + delta / 15.0;
            out.error_estimate += std::abs(delta) / 15.0;
            return;
        }
        recurse(a, m, fa, flm, fm, left, 0.5 * abs_tol, depth + 1);
        recurse(m, b, fm, frm, fb, right, 0.5 * abs_tol, depth + 1);
    }
};

} // namespace detail

/// Adaptive Simpson with Richardson correction on [lo, hi]. The absolute
/// floor is halved on each split; the relative tolerance applies locally.
/// `converged` is false if some branch hit `max_depth` short of its share.
template <class F>
QuadratureResult adaptive_simpson_t(const F& f, double lo, double hi, const Tolerance& tol = {}) {
    if (!(hi > lo)) return {};
    detail::SimpsonState<F> state{f, tol.rel, tol.max_depth, {}};
    const double fa = f(lo);
    const double fm = f(0.5 * (lo + hi));
    const double fb = f(hi);
    state.out.evaluations = 3;
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    state.recurse(lo, hi, fa, fm, fb, whole, tol.abs, 0);
    return state.out;
}

/// Splits [lo, hi] at interior breakpoints (kinks of a piecewise integrand)
/// before integrating each piece adaptively.
template <class F>
QuadratureResult adaptive_simpson_split_t(const F& f, double lo, double hi,
                                          std::span<const double> breakpoints,
                                          const Tolerance& tol = {}) {
    QuadratureResult total;
    double start = lo;
    for (double bp : breakpoints) {
        if (bp <= start) continue;
        if (bp >= hi) break;
        total += adaptive_simpson_t(f, start, bp, tol);
        start = bp;
    }
    total += adaptive_simpson_t(f, start, hi, tol);
    return total;
}

using Integrand = std::function<double(double)>;

QuadratureResult adaptive_simpson(const Integrand& f, double lo, double hi,
                                  const Tolerance& tol = {});

/// Integral of f over [lo, inf) through y = u / (1 - u). `g_at_one` is the
/// limit of f(y(u)) / (1 - u)^2 as u -> 1; lo must be >= 0.
QuadratureResult integrate_to_infinity(const Integrand& f, double lo, double g_at_one,
                                       const Tolerance& tol = {});

/// Fixed-step composite Simpson; `panels` is rounded up to an even count.
double composite_simpson(const Integrand& f, double lo, double hi, std::size_t panels);

struct RootResult {
    double x = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct BisectionOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_iterations = 200;
};

/// Root of a nondecreasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
RootResult bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                             const BisectionOptions& opts = {});

/// Root on [0, inf) of a nondecreasing f with f(0) <= 0. The bracket starts
/// at [0, 1] and its upper end doubles until f changes sign.
RootResult bisect_increasing_from_zero(const std::function<double(double)>& f,
                                       const BisectionOptions& opts = {});

} // namespace supmax::numerics
