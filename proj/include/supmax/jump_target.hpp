#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace supmax {

/// Nondecreasing jump target h: R+ -> R+. After a jump from depth y the
/// process lands at level h(y).
class JumpTargetFn {
public:
    struct Constant {
        double a;
    };
    struct Affine {
        double b;  // h(y) = b + y
    };
    struct Knot {
        double y;
        double h;
    };
    /// Piecewise-linear through the knots, constant beyond either end.
    struct Tabulated {
        std::vector<Knot> knots;
    };

    static JumpTargetFn constant(double a);
    static JumpTargetFn affine(double b);
    static JumpTargetFn tabulated(std::vector<Knot> knots);

    double operator()(double y) const;

    bool is_constant() const { return std::holds_alternative<Constant>(rep_); }
    bool is_affine() const { return std::holds_alternative<Affine>(rep_); }
    bool is_tabulated() const { return std::holds_alternative<Tabulated>(rep_); }

    /// a for Constant, b for Affine; nullopt for Tabulated.
    std::optional<double> parameter() const;
    std::span<const Knot> knots() const;

    /// "const", "affine" or "table".
    std::string family_name() const;

    /// Strictly increasing over [0, inf) for Affine; over the knot span for
    /// Tabulated (the constant tail is excluded).
    bool strictly_increasing() const;

    /// lim h(y)/y as y -> inf: 1 for Affine, 0 otherwise.
    double asymptotic_slope() const;

    /// Smallest c >= 0 with h(c) >= level, if any.
    std::optional<double> first_reach(double level) const;

    /// Interior kinks of h on (0, inf), ascending.
    std::vector<double> kinks() const;

private:
    using Rep = std::variant<Constant, Affine, Tabulated>;
    explicit JumpTargetFn(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

} // namespace supmax
