#include "supmax/numerics.hpp"

#include <cmath>
#include <limits>

namespace supmax::numerics {

QuadratureResult adaptive_simpson(const Integrand& f, double lo, double hi, const Tolerance& tol) {
    return adaptive_simpson_t(f, lo, hi, tol);
}

QuadratureResult integrate_to_infinity(const Integrand& f, double lo, double g_at_one,
                                       const Tolerance& tol) {
    const double u_lo = lo / (1.0 + lo);
    auto g = [&](double u) {
        if (u >= 1.0) return g_at_one;
        const double w = 1.0 - u;
        return f(u / w) / (w * w);
    };
    return adaptive_simpson_t(g, u_lo, 1.0, tol);
}

double composite_simpson(const Integrand& f, double lo, double hi, std::size_t panels) {
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = (hi - lo) / static_cast<double>(panels);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < panels; ++i) {
        const double x = lo + h * static_cast<double>(i);
        (i % 2 == 1 ? odd : even) += f(x);
    }
    return h / 3.0 * (f(lo) + 4.0 * odd + 2.0 * even + f(hi));
}

RootResult bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                             const BisectionOptions& opts) {
    RootResult r;
    for (r.iterations = 0; r.iterations < opts.max_iterations; ++r.iterations) {
        const double width = hi - lo;
        const double scale = std::max(std::abs(lo), std::abs(hi));
        if (width <= opts.abs_tol || width <= opts.rel_tol * scale) {
            r.converged = true;
            break;
        }
        const double mid = lo + 0.5 * width;
        if (mid <= lo || mid >= hi) {
            // bracket is down to adjacent doubles
            r.converged = true;
            break;
        }
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    r.x = lo + 0.5 * (hi - lo);
    return r;
}

RootResult bisect_increasing_from_zero(const std::function<double(double)>& f,
                                       const BisectionOptions& opts) {
    double lo = 0.0;
    double hi = 1.0;
    if (f(lo) >= 0.0) return {0.0, 0, true};
    int growth = 0;
    while (f(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++growth > 1100 || !std::isfinite(hi)) return {lo, growth, false};
    }
    RootResult r = bisect_increasing(f, lo, hi, opts);
    r.iterations += growth;
    return r;
}

} // namespace supmax::numerics
