#pragma once

#include "kfrontier/estimator.hpp"
#include "kfrontier/frontier.hpp"
#include "kfrontier/kernel.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kfrontier {

//! Value of the cell-maximum CDF. Where the distribution is known the two
//! bounds coincide; on (m_r, M_r] only the band [lower, upper] is known.
struct CdfValue
{
  double lower;
  double upper;

  bool exact() const { return lower == upper; }
};

//! P(X*_r <= x) for the 0-based cell r:
//! exp((n c / k)(x - k lambda_r)) on [0, m_r], 0 below 0, 1 above M_r.
//! On (m_r, M_r] the value is not available in closed form and an enclosing
//! interval [F(m_r), min(1, exp((n c / k)(x - k lambda_r)))] is returned.
//! Throws ConfigError for r >= k.
CdfValue cell_max_cdf(const CellPartition& partition,
                      std::size_t r,
                      double n,
                      double x);

struct FlatMoments
{
  double mean;
  double variance;
};

//! Exact mean and variance of a cell maximum under the flat frontier
//! f = level (so k lambda_r = level), integrating the survival function.
FlatMoments expected_cell_max_flat(double level,
                                   double n,
                                   std::size_t k,
                                   double c);

//! g_h(x) = int K_h(x - y) f(y) dy with f = 0 outside [0, 1]
//! (quadrature, rel-tol 1e-8 or better).
double smoothed_frontier(const FrontierSpec& spec,
                         const KernelSpec& kernel,
                         double h,
                         double x);

//! Riemann-sum surrogate (1/k) sum_r K_h(x - x_r) f(x_r).
double discretized_smoothed_frontier(const FrontierSpec& spec,
                                     const KernelSpec& kernel,
                                     double h,
                                     std::size_t k,
                                     double x);

//! Scale of the pointwise fluctuation: Var(fhat(x)) ~ (sigma_n sigma)^2.
struct AsymptoticParams
{
  double sigma_n; //!< sqrt(k) / (n sqrt(h))
  double sigma;   //!< ||K||_2 / c
  double n;
  std::size_t k;
  double h;

  double scale() const { return sigma_n * sigma; }
};

AsymptoticParams normalization(double n,
                               std::size_t k,
                               double h,
                               const KernelSpec& kernel,
                               double c);

enum class SelectorMode
{
  mse_raw,      //!< k = n^((a+2)/(3a+2)),  h = n^(-2/(3a+2))
  mse_corrected //!< k = n^((4+2a)/(4+5a)), h = n^(-4/(4+5a))
};

std::string_view to_string(SelectorMode mode);
SelectorMode selector_from_string(std::string_view name);

struct Hyperparams
{
  std::size_t k;
  double h;
};

//! Rate-optimal (k, h) for an alpha-Hoelder frontier; k is rounded, at least
//! 1 and capped below n. Requires n >= 2 and 0 < alpha <= 1.
Hyperparams select_hyperparams(double n, double alpha, SelectorMode mode);

//! Exponent of the L1 error bound: -a/(1 + 3a/2) raw, -a/(1 + 5a/4)
//! corrected.
double target_l1_slope(double alpha, SelectorMode mode);

enum class Situation
{
  A,
  B,
  none
};

std::string_view to_string(Situation s);

//! A finite-n stand-in for one asymptotic growth condition.
struct RegimeProxy
{
  std::string name;
  double value;
  bool should_diverge; //!< true: must grow without bound; false: vanish
  bool checked;        //!< whether it applies to the classified situation
};

struct RegimeReport
{
  Situation situation;
  std::vector<RegimeProxy> proxies;
  std::vector<std::string> warnings;
  //! Conditions for the centered limit of the corrected estimator; reported
  //! without raising warnings.
  std::vector<RegimeProxy> corrected_limit_proxies;
};

//! Diverging proxies below this value raise a warning.
inline constexpr double regime_diverge_threshold = 5.0;
//! Vanishing proxies above this value raise a warning.
inline constexpr double regime_vanish_threshold = 0.2;

RegimeReport regime_report(double n,
                           std::size_t k,
                           double h,
                           double alpha,
                           const KernelSpec& kernel);

struct Interval
{
  double lo;
  double hi;
};

//! estimate +- z_{(1+level)/2} sigma_n sigma, floored at 0.
Interval confidence_interval(double estimate,
                             const AsymptoticParams& params,
                             double level);

//! Plug-in c = 1 / (trapezoid area under the estimate), for use when the
//! normalizer of the true frontier is unknown.
double plugin_normalizer(const EstimateResult& result);

} // namespace kfrontier
