#include "kfrontier/quadrature.hpp"

#include "kfrontier/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace kfrontier {

namespace {

constexpr unsigned max_depth = 30;

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           double a,
                           double b,
                           double rel_tol,
                           std::string_view what)
{
  if (a == b) {
    return { 0.0, 0.0 };
  }
  double error = 0.0;
  double l1 = 0.0;
  const double value =
    boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &error, &l1);
  // Absolute floor covers integrands that are identically zero.
  const double budget = rel_tol * l1 + 1e-300;
  if (!std::isfinite(value) || !std::isfinite(error) || error > budget) {
    throw QuadratureError("quadrature did not converge for " +
                          std::string(what) + " on [" + std::to_string(a) +
                          ", " + std::to_string(b) +
                          "]: error estimate " + std::to_string(error));
  }
  return { value, error };
}

QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     double a,
                                     double b,
                                     std::span<const double> breakpoints,
                                     double rel_tol,
                                     std::string_view what)
{
  std::vector<double> cuts{ a };
  for (double p : breakpoints) {
    if (p > a && p < b) {
      cuts.push_back(p);
    }
  }
  cuts.push_back(b);
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  QuadratureResult total{ 0.0, 0.0 };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto part = integrate(f, cuts[i], cuts[i + 1], rel_tol, what);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

} // namespace kfrontier
