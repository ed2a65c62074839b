#pragma once

#include <algorithm>
#include <string>

#include "edgealloc/errors.hpp"
#include "edgealloc/model.hpp"
#include "edgealloc/scalar_opt.hpp"
#include "edgealloc/trace.hpp"

namespace edgealloc::detail {

/// Inequality residual of the augmented Lagrangian: the constraint value, floored where the
/// multiplier would hit zero.
inline double hinge_residual(double lambda, double g, double rho) { return std::max(g, -lambda / rho); }

/// λ·r + (ρ/2)·r² for the constraint g ≤ 0.
inline double hinge_term(double lambda, double g, double rho) {
    double r = hinge_residual(lambda, g, rho);
    return lambda * r + 0.5 * rho * r * r;
}

inline double dual_update(double lambda, double g, double rho, double beta, DualSign sign) {
    double r = hinge_residual(lambda, g, rho);
    double next = sign == DualSign::standard ? lambda + rho * r : lambda - beta * r;
    return std::max(0.0, next);
}

template <class Fn>
double argmin_named(Fn&& fn, double lo, double hi, double tol, const std::string& what) {
    try {
        return minimize_box({std::forward<Fn>(fn), lo, hi, tol}).argmin;
    } catch (const SolverError& e) {
        throw SolverError("update of " + what + " failed: " + e.what());
    }
}

inline double clamp_interior(double x) { return std::clamp(x, kBoxMargin, 1.0 - kBoxMargin); }

}  // namespace edgealloc::detail
