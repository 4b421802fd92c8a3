#include "supmax/jump_target.hpp"

#include "supmax/errors.hpp"

#include <algorithm>
#include <cmath>

namespace supmax {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double interpolate(std::span<const JumpTargetFn::Knot> k, double y) {
    if (y <= k.front().y) return k.front().h;
    if (y >= k.back().y) return k.back().h;
    auto hi = std::upper_bound(k.begin(), k.end(), y,
                               [](double v, const JumpTargetFn::Knot& kn) { return v < kn.y; });
    auto lo = hi - 1;
    const double w = (y - lo->y) / (hi->y - lo->y);
    return lo->h + w * (hi->h - lo->h);
}

} // namespace

JumpTargetFn JumpTargetFn::constant(double a) {
    detail::require(std::isfinite(a) && a >= 0.0, "constant jump target must be finite and >= 0");
    return JumpTargetFn(Constant{a});
}

JumpTargetFn JumpTargetFn::affine(double b) {
    detail::require(std::isfinite(b) && b > 0.0, "affine jump target needs b > 0");
    return JumpTargetFn(Affine{b});
}

JumpTargetFn JumpTargetFn::tabulated(std::vector<Knot> knots) {
    detail::require(!knots.empty(), "tabulated jump target needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& k = knots[i];
        detail::require(std::isfinite(k.y) && std::isfinite(k.h), "knots must be finite");
        detail::require(k.y >= 0.0, "knot abscissae must be >= 0");
        detail::require(k.h >= 0.0, "knot values must be >= 0");
        if (i > 0) {
            detail::require(k.y > knots[i - 1].y, "knot abscissae must be strictly increasing");
            detail::require(k.h >= knots[i - 1].h, "tabulated h must be nondecreasing");
        }
    }
    return JumpTargetFn(Tabulated{std::move(knots)});
}

double JumpTargetFn::operator()(double y) const {
    return std::visit(Overloaded{
                          [](const Constant& c) { return c.a; },
                          [y](const Affine& a) { return a.b + y; },
                          [y](const Tabulated& t) { return interpolate(t.knots, y); },
                      },
                      rep_);
}

std::optional<double> JumpTargetFn::parameter() const {
    if (auto* c = std::get_if<Constant>(&rep_)) return c->a;
    if (auto* a = std::get_if<Affine>(&rep_)) return a->b;
    return std::nullopt;
}

std::span<const JumpTargetFn::Knot> JumpTargetFn::knots() const {
    if (auto* t = std::get_if<Tabulated>(&rep_)) return t->knots;
    return {};
}

std::string JumpTargetFn::family_name() const {
    return std::visit(Overloaded{
                          [](const Constant&) { return std::string("const"); },
                          [](const Affine&) { return std::string("affine"); },
                          [](const Tabulated&) { return std::string("table"); },
                      },
                      rep_);
}

bool JumpTargetFn::strictly_increasing() const {
    if (is_affine()) return true;
    if (auto* t = std::get_if<Tabulated>(&rep_)) {
        if (t->knots.size() < 2) return false;
        for (std::size_t i = 1; i < t->knots.size(); ++i)
            if (!(t->knots[i].h > t->knots[i - 1].h)) return false;
        return true;
    }
    return false;
}

double JumpTargetFn::asymptotic_slope() const { return is_affine() ? 1.0 : 0.0; }

std::optional<double> JumpTargetFn::first_reach(double level) const {
    return std::visit(
        Overloaded{
            [level](const Constant& c) -> std::optional<double> {
                if (level <= c.a) return 0.0;
                return std::nullopt;
            },
            [level](const Affine& a) -> std::optional<double> {
                return std::max(0.0, level - a.b);
            },
            [level](const Tabulated& t) -> std::optional<double> {
                const auto& k = t.knots;
                if (level <= k.front().h) return 0.0;
                if (level > k.back().h) return std::nullopt;
                // first knot reaching the level; the crossing lies in the segment before it
                auto it = std::find_if(k.begin(), k.end(),
                                       [level](const Knot& kn) { return kn.h >= level; });
                auto prev = it - 1;
                const double w = (level - prev->h) / (it->h - prev->h);
                return prev->y + w * (it->y - prev->y);
            },
        },
        rep_);
}

std::vector<double> JumpTargetFn::kinks() const {
    std::vector<double> out;
    for (const auto& k : knots())
        if (k.y > 0.0) out.push_back(k.y);
    return out;
}

} // namespace supmax
