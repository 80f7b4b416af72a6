#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kfrontier {

//! Smoothness of a kernel, deciding which hypothesis regime it can serve.
enum class Smoothness
{
  discontinuous,        //!< e.g. the uniform kernel; fits neither regime
  lipschitz_only,       //!< beta-Lipschitz, possibly unbounded support (A)
  compact_piecewise_c2  //!< compact, bounded K', piecewise C2 (B)
};

std::string_view to_string(Smoothness s);

struct KernelConstants
{
  double l2_norm_sq;    //!< int K^2
  double second_moment; //!< int u^2 K(u) du
  double l3_norm;       //!< (int K^3)^(1/3)
};

//! A bounded, nonnegative, symmetric Parzen-Rosenblatt kernel with the
//! metadata the asymptotic theory consumes.
class KernelSpec
{
public:
  using Function = double (*)(double);

  //! `support_radius` is +inf for kernels with unbounded support. `beta` is
  //! empty when K is not Hoelder continuous. Declared closed-form constants
  //! are audited numerically; a mismatch throws ConfigError.
  KernelSpec(std::string id,
             Function k,
             double support_radius,
             std::optional<double> beta,
             double lipschitz_const,
             Smoothness smoothness,
             std::optional<KernelConstants> closed_form = std::nullopt);

  const std::string& id() const { return id_; }
  double support_radius() const { return radius_; }
  bool compact() const { return std::isfinite(radius_); }
  std::optional<double> beta() const { return beta_; }
  double lipschitz_const() const { return lipschitz_; }
  Smoothness smoothness() const { return smoothness_; }
  const std::optional<KernelConstants>& closed_form() const
  {
    return closed_form_;
  }

  double operator()(double u) const { return k_(u); }

private:
  std::string id_;
  Function k_;
  double radius_;
  std::optional<double> beta_;
  double lipschitz_;
  Smoothness smoothness_;
  std::optional<KernelConstants> closed_form_;
};

double kernel_eval(const KernelSpec& kernel, double u);

//! K_h(t) = K(t / h) / h. Throws InvalidBandwidth unless h > 0.
double scaled_eval(const KernelSpec& kernel, double h, double t);

//! Closed forms for catalog kernels, numeric integrals (rel-tol 1e-9)
//! otherwise. Throws UnsupportedKernel when a moment diverges.
KernelConstants kernel_constants(const KernelSpec& kernel);

namespace kernels {

//! 1 on [-1/2, 1/2]; with h = 1/k it reproduces Geffroy's estimate.
const KernelSpec& uniform();
const KernelSpec& triangular();
const KernelSpec& epanechnikov();
//! (15/16)(1 - u^2)^2 on [-1, 1]; the default compact kernel.
const KernelSpec& biweight();
//! Standard normal density; the representative unbounded-support kernel.
const KernelSpec& gaussian();

} // namespace kernels

//! Catalog lookup: "uniform", "triangular", "epanechnikov", "biweight",
//! "gaussian". Throws ConfigError for unknown names.
const KernelSpec& kernel_by_name(std::string_view name);
std::vector<std::string> kernel_names();

//! (1/k) sum_r K_h(x - x_r) over the cell centers x_r = (r - 1/2)/k.
double kernel_riemann_sum(const KernelSpec& kernel,
                          double h,
                          std::size_t k,
                          double x);

//! (1/(h k)) sum_r K((x - x_r)/h) K((y - x_r)/h).
double cross_kernel_sum(const KernelSpec& kernel,
                        double h,
                        std::size_t k,
                        double x,
                        double y);

//! Center of the r-th cell (0-based) of the equal-width partition into k.
inline double cell_center(std::size_t r, std::size_t k)
{
  return (static_cast<double>(r) + 0.5) / static_cast<double>(k);
}

//! Calls fn(r) for every 0-based cell whose center lies within `radius` of
//! `center`, plus one guard cell on each side. With an infinite radius every
//! cell is visited.
template<class Fn>
void for_cells_near(double center, double radius, std::size_t k, Fn&& fn)
{
  if (k == 0) {
    return;
  }
  std::size_t first = 0;
  std::size_t last = k - 1;
  if (std::isfinite(radius)) {
    const double kd = static_cast<double>(k);
    const double lo = std::floor((center - radius) * kd - 0.5) - 1.0;
    const double hi = std::ceil((center + radius) * kd - 0.5) + 1.0;
    if (hi < 0.0 || lo > kd - 1.0) {
      return;
    }
    first = lo <= 0.0 ? 0 : static_cast<std::size_t>(lo);
    last = hi >= kd - 1.0 ? k - 1 : static_cast<std::size_t>(hi);
  }
  for (std::size_t r = first; r <= last; ++r) {
    fn(r);
  }
}

} // namespace kfrontier
