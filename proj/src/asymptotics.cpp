#include "kfrontier/asymptotics.hpp"

#include "kfrontier/error.hpp"
#include "kfrontier/quadrature.hpp"
#include "kfrontier/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace kfrontier {

namespace {

constexpr double smoothing_rel_tol = 1e-10;
// Beyond 40 standard deviations the Gaussian kernel is below 1e-300.
constexpr double unbounded_cutoff = 40.0;

void require_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be positive and finite");
  }
}

} // namespace

CdfValue cell_max_cdf(const CellPartition& partition,
                      std::size_t r,
                      double n,
                      double x)
{
  if (r >= partition.k) {
    throw ConfigError("cell index " + std::to_string(r) + " out of range [0, " +
                      std::to_string(partition.k) + ")");
  }
  if (x < 0.0) {
    return { 0.0, 0.0 };
  }
  if (x > partition.maxs[r]) {
    return { 1.0, 1.0 };
  }
  const double kd = static_cast<double>(partition.k);
  const double rate = n * partition.normalizer / kd;
  const double lambda = kd * partition.measures[r];
  const double known = std::min(1.0, std::exp(rate * (x - lambda)));
  if (x <= partition.mins[r]) {
    return { known, known };
  }
  // Above m_r the exponent integrates (f - x)_+ instead of f - x, so the
  // closed form only bounds the CDF from above; monotonicity gives the value
  // at m_r as a lower bound.
  return { std::exp(rate * (partition.mins[r] - lambda)), known };
}

FlatMoments expected_cell_max_flat(double level,
                                   double n,
                                   std::size_t k,
                                   double c)
{
  require_positive(level, "level");
  require_positive(n, "n");
  require_positive(c, "c");
  if (k == 0) {
    throw ConfigError("k must be >= 1");
  }
  // X* has CDF exp(a (x - level)) on [0, level] with an atom exp(-a level)
  // at 0, a = n c / k.
  const double a = n * c / static_cast<double>(k);
  const double q = std::exp(-a * level);
  const double s = -std::expm1(-a * level);
  const double mean = level - s / a;
  const double variance = (1.0 - q * q) / (a * a) - 2.0 * level * q / a;
  return { mean, variance };
}

double smoothed_frontier(const FrontierSpec& spec,
                         const KernelSpec& kernel,
                         double h,
                         double x)
{
  require_positive(h, "bandwidth");
  const double radius = kernel.compact() ? kernel.support_radius()
                                         : unbounded_cutoff;
  // Substituting y = x - h u: g(x) = int K(u) f(x - h u) du over the part of
  // the kernel support mapped into [0, 1].
  const double lo = std::max(-radius, (x - 1.0) / h);
  const double hi = std::min(radius, x / h);
  if (!(hi > lo)) {
    return 0.0;
  }
  std::vector<double> cuts{ 0.0 };
  for (double kink : spec.kinks()) {
    cuts.push_back((x - kink) / h);
  }
  const auto integrand = [&](double u) { return kernel(u) * spec(x - h * u); };
  return integrate_piecewise(integrand, lo, hi, cuts, smoothing_rel_tol,
                             "smoothed frontier " + spec.id())
    .value;
}

double discretized_smoothed_frontier(const FrontierSpec& spec,
                                     const KernelSpec& kernel,
                                     double h,
                                     std::size_t k,
                                     double x)
{
  require_positive(h, "bandwidth");
  if (k == 0) {
    throw ConfigError("k must be >= 1");
  }
  double sum = 0.0;
  for_cells_near(x, kernel.support_radius() * h, k, [&](std::size_t r) {
    const double c = cell_center(r, k);
    sum += kernel((x - c) / h) * spec(c);
  });
  return sum / (h * static_cast<double>(k));
}

AsymptoticParams normalization(double n,
                               std::size_t k,
                               double h,
                               const KernelSpec& kernel,
                               double c)
{
  require_positive(n, "n");
  require_positive(h, "bandwidth");
  require_positive(c, "c");
  if (k == 0) {
    throw ConfigError("k must be >= 1");
  }
  const double kd = static_cast<double>(k);
  const double l2 = kernel_constants(kernel).l2_norm_sq;
  return { std::sqrt(kd) / (n * std::sqrt(h)), std::sqrt(l2) / c, n, k, h };
}

std::string_view to_string(SelectorMode mode)
{
  return mode == SelectorMode::mse_raw ? "mse_raw" : "mse_corrected";
}

SelectorMode selector_from_string(std::string_view name)
{
  if (name == "mse_raw" || name == "raw") {
    return SelectorMode::mse_raw;
  }
  if (name == "mse_corrected" || name == "corrected") {
    return SelectorMode::mse_corrected;
  }
  throw ConfigError("unknown selector '" + std::string(name) +
                    "' (expected mse_raw or mse_corrected)");
}

Hyperparams select_hyperparams(double n, double alpha, SelectorMode mode)
{
  if (!(n >= 2.0) || !std::isfinite(n)) {
    throw ConfigError("select_hyperparams: n must be >= 2");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("select_hyperparams: alpha must lie in (0, 1]");
  }
  double k_exp = 0.0;
  double h_exp = 0.0;
  if (mode == SelectorMode::mse_raw) {
    k_exp = (alpha + 2.0) / (3.0 * alpha + 2.0);
    h_exp = 2.0 / (3.0 * alpha + 2.0);
  } else {
    k_exp = (4.0 + 2.0 * alpha) / (4.0 + 5.0 * alpha);
    h_exp = 4.0 / (4.0 + 5.0 * alpha);
  }
  double k = std::max(1.0, std::round(std::pow(n, k_exp)));
  const double cap = std::ceil(n) - 1.0;
  k = std::max(1.0, std::min(k, cap));
  return { static_cast<std::size_t>(k), std::pow(n, -h_exp) };
}

double target_l1_slope(double alpha, SelectorMode mode)
{
  return mode == SelectorMode::mse_raw ? -alpha / (1.0 + 1.5 * alpha)
                                       : -alpha / (1.0 + 1.25 * alpha);
}

std::string_view to_string(Situation s)
{
  switch (s) {
    case Situation::A:
      return "A";
    case Situation::B:
      return "B";
    case Situation::none:
      return "none";
  }
  return "none";
}

RegimeReport regime_report(double n,
                           std::size_t k,
                           double h,
                           double alpha,
                           const KernelSpec& kernel)
{
  if (!(n > 1.0) || !std::isfinite(n)) {
    throw ConfigError("regime_report: n must exceed 1");
  }
  require_positive(h, "bandwidth");
  if (k == 0) {
    throw ConfigError("regime_report: k must be >= 1");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("regime_report: alpha must lie in (0, 1]");
  }
  RegimeReport report;
  switch (kernel.smoothness()) {
    case Smoothness::compact_piecewise_c2:
      report.situation = Situation::B;
      break;
    case Smoothness::lipschitz_only:
      report.situation = Situation::A;
      break;
    case Smoothness::discontinuous:
      report.situation = Situation::none;
      break;
  }
  const bool in_a = report.situation == Situation::A;
  const bool in_b = report.situation == Situation::B;
  const double kd = static_cast<double>(k);

  report.proxies.push_back(
    { "h*k^alpha", h * std::pow(kd, alpha), true, in_a });
  if (kernel.beta()) {
    const double beta = *kernel.beta();
    report.proxies.push_back({ "h^(1+beta)*k^beta",
                               std::pow(h, 1.0 + beta) * std::pow(kd, beta),
                               true, in_a });
  }
  report.proxies.push_back({ "h*k", h * kd, true, in_b });
  report.proxies.push_back({ "k*ln(n)/n", kd * std::log(n) / n, false, true });
  report.proxies.push_back(
    { "n/k^(1+alpha)", n / std::pow(kd, 1.0 + alpha), false, true });

  report.corrected_limit_proxies.push_back(
    { "n*h^(1/2+alpha)/k^(1/2)", n * std::pow(h, 0.5 + alpha) / std::sqrt(kd),
      false, in_b });
  report.corrected_limit_proxies.push_back(
    { "n/(k^(5/2)*h^(3/2))", n / (std::pow(kd, 2.5) * std::pow(h, 1.5)), false,
      in_b });

  if (report.situation == Situation::none) {
    report.warnings.push_back(
      "kernel '" + kernel.id() +
      "' is discontinuous: neither situation A nor B holds (as for Geffroy's "
      "estimator); estimates remain usable but the asymptotic results do not "
      "apply");
  }
  for (const auto& p : report.proxies) {
    if (!p.checked) {
      continue;
    }
    char buf[160];
    if (p.should_diverge && p.value < regime_diverge_threshold) {
      std::snprintf(buf, sizeof buf, "%s = %.4g is below %g (should grow)",
                    p.name.c_str(), p.value, regime_diverge_threshold);
      report.warnings.emplace_back(buf);
    } else if (!p.should_diverge && p.value > regime_vanish_threshold) {
      std::snprintf(buf, sizeof buf, "%s = %.4g exceeds %g (should vanish)",
                    p.name.c_str(), p.value, regime_vanish_threshold);
      report.warnings.emplace_back(buf);
    }
  }
  return report;
}

Interval confidence_interval(double estimate,
                             const AsymptoticParams& params,
                             double level)
{
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("confidence level must lie in (0, 1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * params.scale();
  return { std::max(0.0, estimate - half), estimate + half };
}

double plugin_normalizer(const EstimateResult& result)
{
  if (result.x.size() < 2) {
    throw ConfigError("plugin_normalizer: need at least 2 grid points");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < result.x.size(); ++i) {
    area += 0.5 * (result.x[i] - result.x[i - 1]) *
            (result.estimate[i] + result.estimate[i - 1]);
  }
  if (!(area > 0.0)) {
    throw DegenerateSample("estimated frontier has no positive area");
  }
  return 1.0 / area;
}

} // namespace kfrontier
