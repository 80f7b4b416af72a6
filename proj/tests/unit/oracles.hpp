#pragma once

// Reference computations for the tests, written independently of the
// library's quadrature and summation code.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f,
                          double a,
                          double b,
                          double fa,
                          double fm,
                          double fb,
                          double whole,
                          double tol,
                          int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

//! Adaptive Simpson on [a, b]; `pieces` uniform sub-intervals first so that
//! kinks on a coarse grid do not stall the recursion.
inline double integrate(const std::function<double(double)>& f,
                        double a,
                        double b,
                        double tol = 1e-12,
                        int pieces = 64)
{
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * w;
    const double hi = lo + w;
    const double flo = f(lo);
    const double fmid = f(0.5 * (lo + hi));
    const double fhi = f(hi);
    const double whole = w / 6.0 * (flo + 4.0 * fmid + fhi);
    total += simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol / pieces, 40);
  }
  return total;
}

//! Box-Muller standard normal from two uniforms in [0, 1).
inline double box_muller(double u1, double u2)
{
  return std::sqrt(-2.0 * std::log1p(-u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace oracle
