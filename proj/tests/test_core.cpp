#include <doctest.h>

#include "supmax/construction.hpp"
#include "supmax/errors.hpp"
#include "supmax/jump_target.hpp"
#include "supmax/numerics.hpp"
#include "supmax/rng.hpp"
#include "supmax/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace supmax;

namespace {

BigJumpSpec constant_spec(double mu, double sigma2, double a) {
    return BigJumpSpec(mu, sigma2, JumpTargetFn::constant(a));
}
BigJumpSpec affine_spec(double mu, double sigma2, double b) {
    return BigJumpSpec(mu, sigma2, JumpTargetFn::affine(b));
}
// h: (0,1) -> (1,2) -> (3,2.5), flat afterwards
BigJumpSpec table_spec() {
    return BigJumpSpec(1.0, 1.0, JumpTargetFn::tabulated({{0.0, 1.0}, {1.0, 2.0}, {3.0, 2.5}}));
}

// Plain composite Simpson on a fixed grid, kept apart from the library code.
template <class F>
double simpson_oracle(const F& f, double lo, double hi, int panels) {
    const double h = (hi - lo) / panels;
    double s = f(lo) + f(hi);
    for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("bound_tail") {
    CHECK(bound_tail(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bound_tail(7.3, 0.0) == 1.0);
    CHECK(bound_tail(0.5, 4.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(bound_tail(-1.0, 1.0), InfeasibleParameters);
    CHECK_THROWS_AS(bound_tail(1.0, -0.1), InfeasibleParameters);
}

TEST_CASE("uniform_lower_bound") {
    CHECK(uniform_lower_bound(1.0, 0.0) == doctest::Approx(0.2));
    CHECK(uniform_lower_bound(1.0, 10.0) == doctest::Approx(1.0 / 55.0).epsilon(1e-15));
    CHECK(uniform_lower_bound(0.0, 5.0) == doctest::Approx(0.2));
    CHECK_THROWS_AS(uniform_lower_bound(1.0, -1.0), InfeasibleParameters);
}

TEST_CASE("kingman_bounds") {
    auto k = kingman_bounds(0.1, 10.0);
    CHECK(k.mean_bound == doctest::Approx(5.0));
    CHECK(k.tail_bound == doctest::Approx(0.5));
    k = kingman_bounds(1.0, 0.25);
    CHECK(k.mean_bound == doctest::Approx(0.5));
    CHECK(k.tail_bound == 1.0);
    k = kingman_bounds(0.5, 4.0);
    CHECK(k.mean_bound == doctest::Approx(1.0));
    CHECK(k.tail_bound == doctest::Approx(0.25));
    CHECK_THROWS_AS(kingman_bounds(0.0, 1.0), InfeasibleParameters);
    CHECK_THROWS_AS(kingman_bounds(1.0, 0.0), InfeasibleParameters);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(constant_spec(1.0, 1.0, 0.0), DegenerateConstruction);
    CHECK_THROWS_AS(constant_spec(0.0, 1.0, 1.0), InfeasibleParameters);
    CHECK_THROWS_AS(constant_spec(1.0, -1.0, 1.0), InfeasibleParameters);
    CHECK_THROWS_AS(JumpTargetFn::constant(-1.0), InfeasibleParameters);
    CHECK_THROWS_AS(JumpTargetFn::affine(0.0), InfeasibleParameters);
    const auto spec = constant_spec(2.0, 8.0, 1.0);
    CHECK(spec.gamma() == 0.25);
}

TEST_CASE("jump target families") {
    const auto c = JumpTargetFn::constant(2.0);
    CHECK(c(0.0) == 2.0);
    CHECK(c(1e6) == 2.0);
    CHECK(c.first_reach(2.0).value() == 0.0);
    CHECK_FALSE(c.first_reach(2.5).has_value());

    const auto a = JumpTargetFn::affine(1.5);
    CHECK(a(2.0) == 3.5);
    CHECK(a.first_reach(1.0).value() == 0.0);
    CHECK(a.first_reach(4.0).value() == doctest::Approx(2.5));
    CHECK(a.strictly_increasing());
    CHECK(a.asymptotic_slope() == 1.0);

    const auto t = table_spec().h();
    CHECK(t(0.5) == doctest::Approx(1.5));
    CHECK(t(2.0) == doctest::Approx(2.25));
    CHECK(t(100.0) == 2.5);
    CHECK(t.first_reach(2.2).value() == doctest::Approx(1.8));
    CHECK_FALSE(t.first_reach(2.6).has_value());
    CHECK(t.kinks() == std::vector<double>{1.0, 3.0});
    CHECK(t.family_name() == "table");

    CHECK_THROWS_AS(JumpTargetFn::tabulated({}), InfeasibleParameters);
    CHECK_THROWS_AS(JumpTargetFn::tabulated({{0.0, 2.0}, {1.0, 1.0}}), InfeasibleParameters);
    CHECK_THROWS_AS(JumpTargetFn::tabulated({{1.0, 1.0}, {1.0, 2.0}}), InfeasibleParameters);
    CHECK_THROWS_AS(JumpTargetFn::tabulated({{-1.0, 1.0}}), InfeasibleParameters);
    CHECK_THROWS_AS(JumpTargetFn::tabulated({{0.0, -1.0}}), InfeasibleParameters);
    // h(0) = 0 makes y + h(y) vanish at the origin
    CHECK_THROWS_AS(BigJumpSpec(1.0, 1.0, JumpTargetFn::tabulated({{0.0, 0.0}, {1.0, 1.0}})),
                    DegenerateConstruction);
}

TEST_CASE("drift_rate and hazard") {
    CHECK(drift_rate(0.0, constant_spec(1, 1, 1)) == doctest::Approx(2.0));
    CHECK(drift_rate(1e9, constant_spec(1, 1, 1)) - 1.0 < 1e-6);
    CHECK(drift_rate(1.0, affine_spec(1, 4, 2)) == doctest::Approx(2.0));
    CHECK(hazard(0.0, constant_spec(1, 1, 1)) == doctest::Approx(1.0));
    CHECK(hazard(1.0, affine_spec(1, 4, 2)) == doctest::Approx(0.25));
    CHECK(hazard(3.0, constant_spec(1, 1, 1)) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("time_of_depth") {
    CHECK(time_of_depth(0.0, constant_spec(1, 1, 1)) == 0.0);
    CHECK(time_of_depth(1.0, constant_spec(1, 1, 1)) == doctest::Approx(0.594534891891836).epsilon(1e-10));
    // 2 - ln(3)/2
    CHECK(std::abs(time_of_depth(2.0, affine_spec(1, 1, 1)) - 1.450693855665945) < 1e-8);
    CHECK(std::abs(time_of_depth(4.0, table_spec()) - 3.121919313453993) < 1e-8);
    CHECK(std::isinf(time_of_depth(kInfinity, constant_spec(1, 1, 1))));
    CHECK(time_between_depths(1.0, 2.0, affine_spec(1, 1, 1)) ==
          doctest::Approx(time_of_depth(2.0, affine_spec(1, 1, 1)) - time_of_depth(1.0, affine_spec(1, 1, 1)))
              .epsilon(1e-10));
}

TEST_CASE("depth_at_time") {
    const auto spec = constant_spec(1, 1, 1);
    CHECK(depth_at_time(0.0, spec) == 0.0);
    for (double c : {0.1, 1.0, 10.0}) {
        CHECK(std::abs(depth_at_time(time_of_depth(c, spec), spec) - c) < 1e-9);
        const double t = time_of_depth(c, affine_spec(1, 1, 16.0 / 9.0));
        CHECK(time_of_depth(depth_at_time(t, affine_spec(1, 1, 16.0 / 9.0)), affine_spec(1, 1, 16.0 / 9.0)) ==
              doctest::Approx(t).epsilon(1e-10));
    }
    const double far = depth_at_time(1e6, spec) / 1e6;
    CHECK(far >= 1.0);
    CHECK(far <= 1.01);
    const double y = depth_at_time(0.7, spec);
    CHECK(depth_after(y, 0.3, spec) == doctest::Approx(depth_at_time(1.0, spec)).epsilon(1e-10));
}

TEST_CASE("cumulative_hazard") {
    CHECK(cumulative_hazard(0.0, constant_spec(1, 1, 1)) == 0.0);
    CHECK(cumulative_hazard(kInfinity, affine_spec(1, 1, 16.0 / 9.0)) ==
          doctest::Approx(0.22314355131420976).epsilon(1e-12));
    CHECK(cumulative_hazard(kInfinity, constant_spec(1, 1, 1)) == doctest::Approx(0.6931471805599453).epsilon(1e-12));
    CHECK(cumulative_hazard(kInfinity, constant_spec(2, 1, 0.5)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    for (double c : {0.0, 0.3, 1.0, 7.0, 250.0}) {
        CHECK(std::abs(cumulative_hazard(c, affine_spec(1.5, 0.7, 0.9)) -
                       closed_form::cumulative_hazard_affine(1.5, 0.7, 0.9, c)) < 1e-10);
        CHECK(std::abs(cumulative_hazard(c, constant_spec(0.6, 2.0, 3.0)) -
                       closed_form::cumulative_hazard_constant(0.6, 2.0, 3.0, c)) < 1e-10);
    }
    const auto t = table_spec();
    CHECK(std::abs(cumulative_hazard(2.0, t) - 0.263830937081741) < 1e-10);
    CHECK(std::abs(cumulative_hazard(5.0, t) - 0.341125885994134) < 1e-10);
    CHECK(std::abs(cumulative_hazard(kInfinity, t) - 0.466289028948140) < 1e-10);
    CHECK(cumulative_hazard_between(2.0, 5.0, t) ==
          doctest::Approx(cumulative_hazard(5.0, t) - cumulative_hazard(2.0, t)).epsilon(1e-10));
}

TEST_CASE("inverse_cumulative_hazard") {
    const auto spec = affine_spec(1, 1, 16.0 / 9.0);
    const double total = cumulative_hazard(kInfinity, spec);
    for (double target : {0.0, 1e-6, 0.05, 0.2, 0.2231}) {
        const double c = inverse_cumulative_hazard(target, spec);
        CHECK(cumulative_hazard(c, spec) == doctest::Approx(target).epsilon(1e-9));
    }
    CHECK(std::isinf(inverse_cumulative_hazard(total, spec)));
    CHECK(std::isinf(inverse_cumulative_hazard(total + 1.0, spec)));
}

TEST_CASE("closed-form tails") {
    CHECK(example1_tail(1, 1, 1) == 0.5);
    CHECK(example1_tail(1, 2, 3) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(example1_tail(1.7, 0.3, 0.0) == 1.0);
    CHECK_THROWS_AS(example1_tail(0.0, 1.0, 1.0), InfeasibleParameters);

    const double b = 16.0 / 9.0;
    CHECK(example2_tail(1, 1, b, 1.0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(std::abs(example2_tail(1, 1, b, 10.0) - 0.0216580500545907) < 1e-13);
    CHECK(std::abs(example2_tail(1, 1, b, 5.0) - 0.0472531132063416) < 1e-13);
    CHECK(std::abs(example2_tail(1, 1, b, std::nextafter(b, 0.0)) - example2_tail(1, 1, b, std::nextafter(b, 10.0))) <
          1e-12);
    CHECK(example2_tail(1, 1, b, 0.0) == doctest::Approx(0.2));
    CHECK_THROWS_AS(example2_tail(1, 1, 0.0, 1.0), InfeasibleParameters);

    CHECK(example2_b_star(1, 1) == doctest::Approx(16.0 / 9.0).epsilon(1e-15));
    CHECK(example2_b_star(2, 1) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK_THROWS_AS(example2_b_star(0.0, 1.0), InfeasibleParameters);
}

TEST_CASE("analytic_tail") {
    CHECK(analytic_tail(constant_spec(1, 1, 1), 0.0) == 1.0);
    CHECK(analytic_tail(constant_spec(1, 1, 1), 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(analytic_tail(constant_spec(1, 1, 1), 1.5) == 0.0);
    CHECK(analytic_tail(affine_spec(1, 1, 16.0 / 9.0), 10.0) == doctest::Approx(0.0216580500545907).epsilon(1e-11));
    CHECK(std::abs(analytic_tail(table_spec(), 2.2) - 0.148084046888039) < 1e-9);
    CHECK(std::abs(analytic_tail(table_spec(), 1.5) - 0.238699461299613) < 1e-9);
    CHECK(analytic_tail(table_spec(), 2.6) == 0.0);
}

TEST_CASE("Example-2 scalar inequality on a log grid") {
    for (int k = -30; k <= 30; ++k) {
        const double alpha = std::pow(10.0, k / 10.0);
        CHECK(std::sqrt(1.0 + alpha / 2.0) - 1.0 >= alpha / (4.0 * (1.0 + alpha)));
    }
}

TEST_CASE("bound_tail is decreasing and convex") {
    for (double gamma : {0.1, 1.0, 3.0}) {
        double prev = 2.0;
        for (int i = 0; i < 200; ++i) {
            const double a = 0.05 * i;
            const double f = bound_tail(gamma, a);
            CHECK(f < prev);
            prev = f;
            if (i > 0)
                CHECK(bound_tail(gamma, a - 0.05) - 2.0 * f + bound_tail(gamma, a + 0.05) >= 0.0);
        }
    }
}

TEST_CASE("closed forms respect the bound") {
    for (double mu : {0.5, 1.0, 2.0})
        for (double sigma2 : {0.5, 1.0, 2.0}) {
            const double gamma = mu / sigma2;
            for (double a : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
                CHECK(std::abs(example1_tail(mu, sigma2, a) - bound_tail(gamma, a)) <= 1e-12);
                for (double b : {0.3, 1.0, 4.0}) CHECK(example2_tail(mu, sigma2, b, a) <= bound_tail(gamma, a) + 1e-15);
            }
            const double bs = example2_b_star(mu, sigma2);
            for (int k = 0; k <= 60; ++k) {
                const double a = k == 0 ? 0.0 : bs * std::pow(10.0, -2.0 + k / 10.0);
                CHECK(example2_tail(mu, sigma2, bs, a) >= uniform_lower_bound(gamma, a) * (1.0 - 1e-12));
            }
        }
}

TEST_CASE("survival identity for strictly increasing targets") {
    const auto aff = affine_spec(1.3, 0.8, 0.6);
    const double total = cumulative_hazard(kInfinity, aff);
    for (double c : {0.0, 0.5, 2.0, 20.0}) {
        const double tail = std::exp(-cumulative_hazard(c, aff)) - std::exp(-total);
        CHECK(tail == doctest::Approx(example2_tail(1.3, 0.8, 0.6, 0.6 + c)).epsilon(1e-9));
    }
    const auto tab = table_spec();
    const double tab_total = cumulative_hazard(kInfinity, tab);
    for (double c : {0.25, 1.0, 2.5}) {
        const double tail = std::exp(-cumulative_hazard(c, tab)) - std::exp(-tab_total);
        CHECK(tail == doctest::Approx(analytic_tail(tab, tab.h()(c))).epsilon(1e-9));
    }
}

TEST_CASE("quadrature agrees with a fixed-step Simpson oracle on a parameter lattice") {
    const std::vector<std::pair<double, double>> moments{{0.5, 0.5}, {0.5, 2.0}, {1.0, 1.0}, {2.0, 0.5}, {2.0, 2.0}};
    int points = 0;
    for (const auto& [mu, sigma2] : moments)
        for (int family = 0; family < 2; ++family)
            for (double p : {0.4, 3.0}) {
                const BigJumpSpec spec = family ? affine_spec(mu, sigma2, p) : constant_spec(mu, sigma2, p);
                auto inv_v = [&](double y) { return 1.0 / (mu + sigma2 / (y + spec.h()(y))); };
                auto dens = [&](double y) {
                    const double j = y + spec.h()(y);
                    return sigma2 / (j * j) / (mu + sigma2 / j);
                };
                for (double c : {0.7, 6.0}) {
                    CHECK(time_of_depth(c, spec) == doctest::Approx(simpson_oracle(inv_v, 0.0, c, 4000)).epsilon(1e-8));
                    CHECK(cumulative_hazard(c, spec) == doctest::Approx(simpson_oracle(dens, 0.0, c, 4000)).epsilon(1e-8));
                }
                ++points;
            }
    CHECK(points == 20);
}

TEST_CASE("numerics") {
    using namespace numerics;
    auto r = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
    auto inf = integrate_to_infinity([](double y) { return 1.0 / ((1.0 + y) * (1.0 + y)); }, 0.0, 1.0);
    CHECK(inf.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(composite_simpson([](double x) { return x * x * x; }, 0.0, 2.0, 2) == doctest::Approx(4.0));
    auto root = bisect_increasing([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(root.converged);
    CHECK(root.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    auto grown = bisect_increasing_from_zero([](double x) { return x - 1000.5; });
    CHECK(grown.x == doctest::Approx(1000.5).epsilon(1e-12));
}

TEST_CASE("wilson interval") {
    auto i = wilson_interval(50, 100);
    CHECK(i.low == doctest::Approx(0.4038315303659956).epsilon(1e-12));
    CHECK(i.high == doctest::Approx(0.5961684696340044).epsilon(1e-12));
    i = wilson_interval(0, 100);
    CHECK(i.low == 0.0);
    CHECK(i.high == doctest::Approx(0.03699349820698569).epsilon(1e-12));
    i = wilson_interval(3, 1000);
    CHECK(i.low == doctest::Approx(0.0010207838811386195).epsilon(1e-10));
    CHECK(i.high == doctest::Approx(0.008783014053503176).epsilon(1e-10));
    i = wilson_interval(100, 100);
    CHECK(i.high == 1.0);
}

TEST_CASE("summation and means") {
    std::vector<double> xs(1000, 0.1);
    CHECK(pairwise_sum(xs) == doctest::Approx(100.0).epsilon(1e-14));
    const std::vector<double> ys{1.0, 2.0, 3.0, 4.0};
    const auto m = estimate_mean(ys);
    CHECK(m.mean == 2.5);
    CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(m.ci_low < 2.5);
    const auto t = make_tail_estimate(20, 100, 1.0);
    CHECK(t.p_hat == 0.2);
    CHECK(t.se() == doctest::Approx(0.04));
}

TEST_CASE("ks distance") {
    std::vector<double> u{0.1, 0.3, 0.5, 0.7, 0.9};
    CHECK(ks_distance(std::span<const double>(u), [](double x) { return x; }) == doctest::Approx(0.1));
    CHECK(ks_critical_1pct(10000) == doctest::Approx(0.01628));
}

TEST_CASE("random streams") {
    RandomStream a(5, 9);
    RandomStream b(5, 9);
    RandomStream c(5, 10);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        differs = differs || x != c();
    }
    CHECK(differs);
    RandomStream r(1, 0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        CHECK_FALSE((u < 0.0 || u >= 1.0));
        sum += r.exponential();
    }
    CHECK(sum / 100000 == doctest::Approx(1.0).epsilon(0.02));
}
