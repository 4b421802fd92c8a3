#include <doctest.h>

#include "cli.hpp"
#include "supmax/construction.hpp"
#include "supmax/simulation.hpp"
#include "supmax/stats.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace supmax;

namespace {

constexpr int kCases = 60;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    JumpTargetFn target() {
        switch (integer(0, 2)) {
        case 0: return JumpTargetFn::constant(log_uniform(0.1, 20.0));
        case 1: return JumpTargetFn::affine(log_uniform(0.1, 20.0));
        default: {
            std::vector<JumpTargetFn::Knot> knots;
            double y = 0.0;
            double h = log_uniform(0.1, 5.0);
            const int n = integer(2, 6);
            for (int k = 0; k < n; ++k) {
                knots.push_back({y, h});
                y += log_uniform(0.05, 5.0);
                if (integer(0, 3) > 0) h += log_uniform(0.01, 5.0);
            }
            return JumpTargetFn::tabulated(std::move(knots));
        }
        }
    }

    BigJumpSpec spec() {
        const double mu = log_uniform(0.1, 10.0);
        const double sigma2 = log_uniform(0.1, 10.0);
        return BigJumpSpec(mu, sigma2, target());
    }

    std::string describe(const BigJumpSpec& s) const {
        std::ostringstream o;
        o << s.h().family_name() << " mu=" << s.mu() << " sigma2=" << s.sigma2();
        if (auto p = s.h().parameter()) o << " param=" << *p;
        for (const auto& k : s.h().knots()) o << " (" << k.y << "," << k.h << ")";
        return o.str();
    }

private:
    std::mt19937_64 eng_;
};

bool close(double x, double y, double rel, double abs = 1e-12) {
    return std::abs(x - y) <= abs + rel * std::max(std::abs(x), std::abs(y));
}

} // namespace

TEST_CASE("descent time and cumulative hazard are increasing in depth") {
    Gen g(11);
    for (int i = 0; i < kCases; ++i) {
        const auto s = g.spec();
        CAPTURE(g.describe(s));
        const double c0 = g.log_uniform(1e-3, 50.0);
        const double c1 = c0 + g.log_uniform(1e-3, 50.0);
        CHECK(time_of_depth(c0, s) < time_of_depth(c1, s));
        CHECK(cumulative_hazard(c0, s) < cumulative_hazard(c1, s));
        CHECK(cumulative_hazard(c1, s) < cumulative_hazard(kInfinity, s));
        CHECK(close(time_between_depths(c0, c1, s), time_of_depth(c1, s) - time_of_depth(c0, s), 1e-8));
        CHECK(close(cumulative_hazard_between(c0, c1, s),
                    cumulative_hazard(c1, s) - cumulative_hazard(c0, s), 1e-8, 1e-12));
        // the descent is at least as fast as the drift alone
        CHECK(time_of_depth(c1, s) <= c1 / s.mu() * (1.0 + 1e-12));
    }
}

TEST_CASE("depth and time round trip") {
    Gen g(12);
    for (int i = 0; i < kCases; ++i) {
        const auto s = g.spec();
        CAPTURE(g.describe(s));
        const double c = g.log_uniform(1e-3, 100.0);
        CHECK(close(depth_at_time(time_of_depth(c, s), s), c, 1e-8, 1e-10));
        const double t1 = g.log_uniform(1e-3, 5.0);
        const double t2 = g.log_uniform(1e-3, 5.0);
        const double c0 = g.log_uniform(1e-3, 10.0);
        CHECK(close(depth_after(depth_after(c0, t1, s), t2, s), depth_after(c0, t1 + t2, s), 1e-8, 1e-10));
    }
}

TEST_CASE("inverse cumulative hazard round trip") {
    Gen g(13);
    for (int i = 0; i < kCases; ++i) {
        const auto s = g.spec();
        CAPTURE(g.describe(s));
        const double c = g.log_uniform(1e-3, 100.0);
        CHECK(close(inverse_cumulative_hazard(cumulative_hazard(c, s), s), c, 1e-7, 1e-9));
        CHECK(inverse_cumulative_hazard(cumulative_hazard(kInfinity, s) * 1.001, s) == kInfinity);
    }
}

TEST_CASE("analytic tail stays under the bound and is nonincreasing") {
    Gen g(14);
    for (int i = 0; i < kCases; ++i) {
        const auto s = g.spec();
        CAPTURE(g.describe(s));
        CHECK(analytic_tail(s, 0.0) == 1.0);
        std::vector<double> levels(8);
        for (auto& a : levels) a = g.log_uniform(1e-3, 200.0);
        std::sort(levels.begin(), levels.end());
        double prev = 1.0;
        for (double a : levels) {
            CAPTURE(a);
            const double p = analytic_tail(s, a);
            CHECK(p >= 0.0);
            CHECK(p <= bound_tail(s.gamma(), a) + 1e-9);
            CHECK(p <= prev + 1e-12);
            prev = p;
        }
    }
}

TEST_CASE("closed-form tails are nonincreasing probabilities") {
    Gen g(15);
    for (int i = 0; i < kCases; ++i) {
        const ClosedFormTail tail{i % 2 ? ClosedFormTail::Family::Example1 : ClosedFormTail::Family::Example2,
                                  g.log_uniform(0.1, 10.0), g.log_uniform(0.1, 10.0), g.log_uniform(0.1, 20.0)};
        CAPTURE(tail.mu);
        CAPTURE(tail.sigma2);
        CAPTURE(tail.param);
        double prev = tail(0.0);
        CHECK(prev <= 1.0);
        for (double a = 0.01; a < 500.0; a *= 1.3) {
            const double p = tail(a);
            CHECK(p >= 0.0);
            CHECK(p <= prev + 1e-12);
            CHECK(p <= bound_tail(tail.mu / tail.sigma2, a) + 1e-12);
            prev = p;
        }
        CHECK(uniform_lower_bound(tail.mu / tail.sigma2, tail.param) <= bound_tail(tail.mu / tail.sigma2, tail.param));
    }
}

TEST_CASE("supremum is the landing level") {
    Gen g(16);
    for (int i = 0; i < kCases; ++i) {
        const JumpSampler sampler(g.spec());
        CAPTURE(g.describe(sampler.spec()));
        const double depth = g.log_uniform(1e-3, 100.0);
        CHECK(sampler.supremum_for_depth(depth) == sampler.landing_level_for_depth(depth));
        CHECK(sampler.jump_size_for_depth(depth) == doctest::Approx(depth + sampler.landing_level_for_depth(depth)));
        CHECK(sampler.supremum_for_depth(kInfinity) == 0.0);
        const double e = g.log_uniform(1e-4, 10.0);
        const double d = sampler.depth_for_exponential(e);
        if (e >= sampler.total_hazard()) CHECK(d == kInfinity);
        else CHECK(close(cumulative_hazard(d, sampler.spec()), e, 1e-7, 1e-10));
    }
}

TEST_CASE("simulated tails agree with the analytic tail") {
    Gen g(17);
    for (int i = 0; i < 12; ++i) {
        const JumpSampler sampler(g.spec());
        CAPTURE(g.describe(sampler.spec()));
        const std::vector<double> levels{g.log_uniform(0.05, 2.0), g.log_uniform(2.0, 30.0)};
        const auto est = estimate_tails(sampler, levels, 20000, RngPolicy{static_cast<std::uint64_t>(i)}, 1);
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const double p = analytic_tail(sampler.spec(), levels[k]);
            CAPTURE(levels[k]);
            const double se = std::sqrt(std::max(p * (1 - p), 1e-6) / 20000.0);
            CHECK(std::abs(est[k].p_hat - p) <= 4.5 * se);
        }
    }
}

TEST_CASE("wilson interval contains the point estimate") {
    Gen g(18);
    for (int i = 0; i < 500; ++i) {
        const auto n = static_cast<std::uint64_t>(g.integer(1, 100000));
        const auto k = static_cast<std::uint64_t>(g.integer(0, static_cast<int>(n)));
        const auto ci = wilson_interval(k, n);
        const double p = static_cast<double>(k) / static_cast<double>(n);
        CAPTURE(k);
        CAPTURE(n);
        CHECK(ci.low >= 0.0);
        CHECK(ci.high <= 1.0);
        CHECK(ci.low <= p + 1e-15);
        CHECK(p <= ci.high + 1e-15);
        const auto wider = wilson_interval(k, n, 3.0);
        CHECK(wider.low <= ci.low + 1e-15);
        CHECK(wider.high >= ci.high - 1e-15);
        const auto more = wilson_interval(4 * k, 4 * n);
        CHECK(more.high - more.low <= ci.high - ci.low + 1e-15);
    }
}

TEST_CASE("pairwise sum matches an extended-precision sum") {
    Gen g(19);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> xs(static_cast<std::size_t>(g.integer(0, 5000)));
        long double ref = 0.0L;
        for (auto& x : xs) {
            x = g.uniform(-1.0, 1.0) * g.log_uniform(1e-3, 1e3);
            ref += x;
        }
        CHECK(std::abs(pairwise_sum(xs) - static_cast<double>(ref)) <= 1e-9);
    }
}

TEST_CASE("command-line flags win over config entries") {
    Gen g(20);
    const auto path = std::filesystem::temp_directory_path() / "supmax_property.cfg";
    const std::vector<std::string> keys{"gamma", "a"};
    for (int i = 0; i < 40; ++i) {
        std::vector<std::string> file_values, flag_values;
        std::vector<bool> flagged;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            file_values.push_back(std::to_string(g.log_uniform(0.1, 10.0)));
            flag_values.push_back(std::to_string(g.log_uniform(0.1, 10.0)));
            flagged.push_back(g.integer(0, 1) == 1);
        }
        {
            std::ofstream f(path);
            for (std::size_t k = 0; k < keys.size(); ++k) f << keys[k] << " = " << file_values[k] << "\n";
        }
        std::vector<std::string> with_config{"bound", "--config", path.string()};
        std::vector<std::string> direct{"bound"};
        for (std::size_t k = 0; k < keys.size(); ++k) {
            if (flagged[k]) with_config.insert(with_config.end(), {"--" + keys[k], flag_values[k]});
            direct.insert(direct.end(), {"--" + keys[k], flagged[k] ? flag_values[k] : file_values[k]});
        }
        if (g.integer(0, 1) == 1) std::rotate(with_config.begin() + 1, with_config.begin() + 3, with_config.end());
        std::ostringstream a, b, err;
        CAPTURE(i);
        CHECK(cli::run_cli(with_config, a, err) == 0);
        CHECK(cli::run_cli(direct, b, err) == 0);
        CHECK(a.str() == b.str());
    }
    std::filesystem::remove(path);
}
