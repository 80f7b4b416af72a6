#include "kfrontier/kernel.hpp"

#include "kfrontier/error.hpp"
#include "kfrontier/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace kfrontier {

namespace {

constexpr double constant_rel_tol = 1e-9;

double uniform_k(double u)
{
  return std::fabs(u) <= 0.5 ? 1.0 : 0.0;
}

double triangular_k(double u)
{
  const double a = std::fabs(u);
  return a < 1.0 ? 1.0 - a : 0.0;
}

double epanechnikov_k(double u)
{
  return std::fabs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

double biweight_k(double u)
{
  if (std::fabs(u) > 1.0) {
    return 0.0;
  }
  const double v = 1.0 - u * u;
  return 0.9375 * v * v;
}

double gaussian_k(double u)
{
  return std::exp(-0.5 * u * u) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double integrate_kernel(const KernelSpec& kernel,
                        double (*weight)(double, double),
                        std::string_view what)
{
  const auto integrand = [&](double u) { return weight(u, kernel(u)); };
  const double a = kernel.compact() ? -kernel.support_radius()
                                    : -std::numeric_limits<double>::infinity();
  const std::array<double, 1> cut{ 0.0 };
  return integrate_piecewise(integrand, a, -a, cut, constant_rel_tol * 1e-2,
                             std::string(what) + " of kernel " + kernel.id())
    .value;
}

KernelConstants numeric_constants(const KernelSpec& kernel)
{
  try {
    const double l2 = integrate_kernel(
      kernel, [](double, double k) { return k * k; }, "int K^2");
    const double mu2 = integrate_kernel(
      kernel, [](double u, double k) { return u * u * k; }, "int u^2 K");
    const double l3 = integrate_kernel(
      kernel, [](double, double k) { return k * k * k; }, "int K^3");
    if (!std::isfinite(l2) || !std::isfinite(mu2) || !std::isfinite(l3)) {
      throw QuadratureError("non-finite moment");
    }
    return { l2, mu2, std::cbrt(l3) };
  } catch (const QuadratureError& e) {
    throw UnsupportedKernel("kernel " + kernel.id() +
                            " lacks a required finite moment (" + e.what() +
                            ")");
  }
}

bool close(double a, double b)
{
  return std::fabs(a - b) <= constant_rel_tol * std::max(1.0, std::fabs(b));
}

} // namespace

std::string_view to_string(Smoothness s)
{
  switch (s) {
    case Smoothness::discontinuous:
      return "discontinuous";
    case Smoothness::lipschitz_only:
      return "lipschitz_only";
    case Smoothness::compact_piecewise_c2:
      return "compact_piecewise_c2";
  }
  return "unknown";
}

KernelSpec::KernelSpec(std::string id,
                       Function k,
                       double support_radius,
                       std::optional<double> beta,
                       double lipschitz_const,
                       Smoothness smoothness,
                       std::optional<KernelConstants> closed_form)
  : id_(std::move(id))
  , k_(k)
  , radius_(support_radius)
  , beta_(beta)
  , lipschitz_(lipschitz_const)
  , smoothness_(smoothness)
  , closed_form_(closed_form)
{
  if (k_ == nullptr) {
    throw ConfigError("kernel " + id_ + ": missing function");
  }
  if (!(radius_ > 0.0)) {
    throw ConfigError("kernel " + id_ + ": support radius must be positive");
  }
  if (beta_ && !(*beta_ > 0.0 && *beta_ <= 1.0)) {
    throw ConfigError("kernel " + id_ + ": beta must lie in (0, 1]");
  }
  if (smoothness_ == Smoothness::compact_piecewise_c2 && !compact()) {
    throw ConfigError("kernel " + id_ +
                      ": piecewise C2 class requires compact support");
  }
  const double mass =
    integrate_kernel(*this, [](double, double v) { return v; }, "int K");
  if (std::fabs(mass - 1.0) > constant_rel_tol) {
    throw ConfigError("kernel " + id_ + " integrates to " +
                      std::to_string(mass) + ", expected 1");
  }
  const double far = compact() ? 10.0 * radius_ : 50.0;
  for (double u : { -far, far }) {
    const double v = k_(u);
    if (!(v >= 0.0) || std::fabs(u * v) > 1e-6) {
      throw ConfigError("kernel " + id_ + ": u K(u) does not vanish in the tails");
    }
  }
  if (closed_form_) {
    const auto num = numeric_constants(*this);
    if (!close(num.l2_norm_sq, closed_form_->l2_norm_sq) ||
        !close(num.second_moment, closed_form_->second_moment) ||
        !close(num.l3_norm, closed_form_->l3_norm)) {
      throw ConfigError("kernel " + id_ +
                        ": declared constants disagree with quadrature");
    }
  }
}

double kernel_eval(const KernelSpec& kernel, double u)
{
  return kernel(u);
}

double scaled_eval(const KernelSpec& kernel, double h, double t)
{
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidBandwidth("bandwidth must be positive and finite");
  }
  return kernel(t / h) / h;
}

KernelConstants kernel_constants(const KernelSpec& kernel)
{
  if (kernel.closed_form()) {
    return *kernel.closed_form();
  }
  return numeric_constants(kernel);
}

namespace kernels {

const KernelSpec& uniform()
{
  static const KernelSpec k("uniform", uniform_k, 0.5, std::nullopt, 0.0,
                            Smoothness::discontinuous,
                            KernelConstants{ 1.0, 1.0 / 12.0, 1.0 });
  return k;
}

const KernelSpec& triangular()
{
  static const KernelSpec k("triangular", triangular_k, 1.0, 1.0, 1.0,
                            Smoothness::compact_piecewise_c2,
                            KernelConstants{ 2.0 / 3.0, 1.0 / 6.0,
                                             std::cbrt(0.5) });
  return k;
}

const KernelSpec& epanechnikov()
{
  static const KernelSpec k("epanechnikov", epanechnikov_k, 1.0, 1.0, 1.5,
                            Smoothness::compact_piecewise_c2,
                            KernelConstants{ 0.6, 0.2, std::cbrt(27.0 / 70.0) });
  return k;
}

const KernelSpec& biweight()
{
  // max |K'| = (15/4) u (1 - u^2) at u = 1/sqrt(3).
  static const KernelSpec k("biweight", biweight_k, 1.0, 1.0,
                            5.0 / (2.0 * std::numbers::sqrt3),
                            Smoothness::compact_piecewise_c2,
                            KernelConstants{ 5.0 / 7.0, 1.0 / 7.0,
                                             std::cbrt(1125.0 / 2002.0) });
  return k;
}

const KernelSpec& gaussian()
{
  static const KernelSpec k(
    "gaussian", gaussian_k, std::numeric_limits<double>::infinity(), 1.0,
    std::exp(-0.5) * 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2,
    Smoothness::lipschitz_only,
    KernelConstants{ 0.5 * std::numbers::inv_sqrtpi, 1.0,
                     std::cbrt(1.0 / (2.0 * std::numbers::pi * std::numbers::sqrt3)) });
  return k;
}

} // namespace kernels

const KernelSpec& kernel_by_name(std::string_view name)
{
  if (name == "uniform") {
    return kernels::uniform();
  }
  if (name == "triangular") {
    return kernels::triangular();
  }
  if (name == "epanechnikov") {
    return kernels::epanechnikov();
  }
  if (name == "biweight") {
    return kernels::biweight();
  }
  if (name == "gaussian") {
    return kernels::gaussian();
  }
  throw ConfigError("unknown kernel '" + std::string(name) +
                    "' (expected uniform, triangular, epanechnikov, "
                    "biweight, gaussian)");
}

std::vector<std::string> kernel_names()
{
  return { "uniform", "triangular", "epanechnikov", "biweight", "gaussian" };
}

double kernel_riemann_sum(const KernelSpec& kernel,
                          double h,
                          std::size_t k,
                          double x)
{
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidBandwidth("bandwidth must be positive and finite");
  }
  if (k == 0) {
    throw ConfigError("cell count must be >= 1");
  }
  double sum = 0.0;
  for_cells_near(x, kernel.support_radius() * h, k, [&](std::size_t r) {
    sum += kernel((x - cell_center(r, k)) / h);
  });
  return sum / (h * static_cast<double>(k));
}

double cross_kernel_sum(const KernelSpec& kernel,
                        double h,
                        std::size_t k,
                        double x,
                        double y)
{
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidBandwidth("bandwidth must be positive and finite");
  }
  if (k == 0) {
    throw ConfigError("cell count must be >= 1");
  }
  double sum = 0.0;
  for_cells_near(x, kernel.support_radius() * h, k, [&](std::size_t r) {
    const double c = cell_center(r, k);
    sum += kernel((x - c) / h) * kernel((y - c) / h);
  });
  return sum / (h * static_cast<double>(k));
}

} // namespace kfrontier
