#pragma once

#include <stdexcept>
#include <string>

namespace supmax {

/// Parameters outside the domain of an operation (negative rates, infeasible
/// constructions, malformed tables).
class InfeasibleParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// y + h(y) vanishes somewhere on [0, inf), so neither the drift ODE nor the
/// hazard is finite there.
class DegenerateConstruction : public InfeasibleParameters {
public:
    using InfeasibleParameters::InfeasibleParameters;
};

/// A quadrature or root solve did not reach its tolerance.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InfeasibleParameters(what);
}

} // namespace detail
} // namespace supmax
