#pragma once

#include <functional>
#include <span>
#include <string_view>

namespace kfrontier {

struct QuadratureResult
{
  double value;
  double error;
};

//! Adaptive Gauss-Kronrod (7/15) integration of `f` over [a, b].
//!
//! Infinite limits are accepted. Throws QuadratureError, mentioning `what`,
//! when the error estimate exceeds `rel_tol` relative to the L1 norm of the
//! integrand or when the result is not finite.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double a,
                           double b,
                           double rel_tol,
                           std::string_view what);

//! Same as integrate(), splitting [a, b] at the given interior breakpoints
//! (kinks or jumps of the integrand). Breakpoints outside (a, b) are ignored.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     double a,
                                     double b,
                                     std::span<const double> breakpoints,
                                     double rel_tol,
                                     std::string_view what);

} // namespace kfrontier
