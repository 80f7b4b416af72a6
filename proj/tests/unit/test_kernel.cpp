#include "oracles.hpp"

#include "kfrontier/error.hpp"
#include "kfrontier/kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

using namespace kfrontier;

namespace {

double lower(const KernelSpec& k)
{
  return k.compact() ? -k.support_radius() : -40.0;
}

double oracle_integral(const KernelSpec& k, std::function<double(double)> g)
{
  // Split at 0 and at the support ends so kinks fall on piece boundaries.
  const double a = lower(k);
  return oracle::integrate(g, a, 0.0, 1e-13, 64) +
         oracle::integrate(g, 0.0, -a, 1e-13, 64);
}

} // namespace

TEST_CASE("kernel_eval examples")
{
  CHECK(kernel_eval(kernels::uniform(), 0.0) == 1.0);
  CHECK(kernel_eval(kernels::epanechnikov(), 0.0) == 0.75);
  CHECK(kernel_eval(kernels::epanechnikov(), 2.0) == 0.0);
}

TEST_CASE("scaled_eval examples")
{
  CHECK(scaled_eval(kernels::uniform(), 0.1, 0.0) ==
        doctest::Approx(10.0).epsilon(1e-15));
  CHECK(scaled_eval(kernels::epanechnikov(), 0.5, 0.25) == 1.125);
  for (const auto& name : kernel_names()) {
    const auto& k = kernel_by_name(name);
    for (double u : { -0.7, 0.0, 0.3, 1.4 }) {
      CHECK(scaled_eval(k, 1.0, u) == kernel_eval(k, u));
    }
    CHECK_THROWS_AS(scaled_eval(k, 0.0, 0.1), InvalidBandwidth);
    CHECK_THROWS_AS(scaled_eval(k, -1.0, 0.1), InvalidBandwidth);
  }
}

TEST_CASE("kernel_constants examples")
{
  CHECK(kernel_constants(kernels::uniform()).l2_norm_sq == 1.0);
  CHECK(kernel_constants(kernels::epanechnikov()).l2_norm_sq ==
        doctest::Approx(0.6).epsilon(1e-15));
  CHECK(kernel_constants(kernels::epanechnikov()).second_moment ==
        doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("catalog constants agree with an independent integral")
{
  for (const auto& name : kernel_names()) {
    CAPTURE(name);
    const auto& k = kernel_by_name(name);
    const auto c = kernel_constants(k);
    const double l2 =
      oracle_integral(k, [&](double u) { return k(u) * k(u); });
    const double m2 =
      oracle_integral(k, [&](double u) { return u * u * k(u); });
    const double l3 = std::cbrt(
      oracle_integral(k, [&](double u) { return k(u) * k(u) * k(u); }));
    CHECK(c.l2_norm_sq == doctest::Approx(l2).epsilon(1e-9));
    CHECK(c.second_moment == doctest::Approx(m2).epsilon(1e-9));
    CHECK(c.l3_norm == doctest::Approx(l3).epsilon(1e-9));
  }
}

TEST_CASE("kernels are nonnegative densities with vanishing tails")
{
  for (const auto& name : kernel_names()) {
    CAPTURE(name);
    const auto& k = kernel_by_name(name);
    CHECK(oracle_integral(k, [&](double u) { return k(u); }) ==
          doctest::Approx(1.0).epsilon(1e-9));
    for (int i = -3000; i <= 3000; ++i) {
      REQUIRE(k(i / 1000.0) >= 0.0);
    }
    const double far = k.compact() ? 10.0 * k.support_radius() : 50.0;
    CHECK(std::abs(far * k(far)) <= 1e-6);
    CHECK(std::abs(far * k(-far)) <= 1e-6);
    if (k.compact()) {
      CHECK(k(k.support_radius() * 1.0001) == 0.0);
    }
  }
}

TEST_CASE("scaled kernels integrate to one for every bandwidth")
{
  for (const auto& name : kernel_names()) {
    const auto& k = kernel_by_name(name);
    for (double h : { 0.05, 0.3, 2.0 }) {
      CAPTURE(name);
      CAPTURE(h);
      const double a = lower(k) * h;
      const auto g = [&](double t) { return scaled_eval(k, h, t); };
      const double total = oracle::integrate(g, a, 0.0, 1e-13, 64) +
                           oracle::integrate(g, 0.0, -a, 1e-13, 64);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("declared Lipschitz constants hold")
{
  for (const auto& name : kernel_names()) {
    const auto& k = kernel_by_name(name);
    if (k.smoothness() == Smoothness::discontinuous) {
      continue;
    }
    CAPTURE(name);
    double worst = 0.0;
    for (int i = -4000; i < 4000; ++i) {
      const double u = i / 1000.0;
      worst = std::max(worst, std::abs(k(u + 1e-3) - k(u)) / 1e-3);
    }
    CHECK(worst <= k.lipschitz_const() * (1.0 + 1e-9));
    CHECK(worst >= 0.99 * k.lipschitz_const());
  }
}

TEST_CASE("smoothness classes")
{
  CHECK(kernels::uniform().smoothness() == Smoothness::discontinuous);
  CHECK(kernels::gaussian().smoothness() == Smoothness::lipschitz_only);
  CHECK(!kernels::gaussian().compact());
  for (const auto* k : { &kernels::triangular(), &kernels::epanechnikov(),
                         &kernels::biweight() }) {
    CHECK(k->smoothness() == Smoothness::compact_piecewise_c2);
    CHECK(k->support_radius() == 1.0);
  }
  CHECK_THROWS_AS(kernel_by_name("cosine"), ConfigError);
}

TEST_CASE("Riemann-sum defect shrinks with k")
{
  for (const auto& name : kernel_names()) {
    CAPTURE(name);
    const auto& k = kernel_by_name(name);
    const double coarse = std::abs(kernel_riemann_sum(k, 0.1, 50, 0.5) - 1.0);
    const double fine = std::abs(kernel_riemann_sum(k, 0.1, 400, 0.5) - 1.0);
    CHECK(fine < 0.01);
    // The Gaussian defect is dominated by the mass outside [0, 1]
    // (about 5.7e-7 at h = 0.1), which does not depend on k.
    CHECK(fine <= coarse + 1e-6);
  }
}

TEST_CASE("cross-kernel sums decay for x != y")
{
  const std::vector<double> hs{ 0.2, 0.1, 0.05 };
  for (const auto& name : kernel_names()) {
    CAPTURE(name);
    const auto& k = kernel_by_name(name);
    std::vector<double> v;
    for (double h : hs) {
      v.push_back(cross_kernel_sum(k, h, 1000, 0.3, 0.7));
      CHECK(v.back() >= 0.0);
    }
    CHECK(v[1] <= v[0]);
    CHECK(v[2] <= v[1]);
    CHECK(v[2] < 0.01);
  }
  // Compact kernels of radius <= 1 give exactly 0 here (|x - y| = 0.4 >
  // 2 A h), so strict decrease is only observable for the Gaussian.
  const auto& g = kernels::gaussian();
  const double a = cross_kernel_sum(g, 0.2, 1000, 0.3, 0.7);
  const double b = cross_kernel_sum(g, 0.1, 1000, 0.3, 0.7);
  const double c = cross_kernel_sum(g, 0.05, 1000, 0.3, 0.7);
  CHECK(a > b);
  CHECK(b > c);
  // Continuous analogue over [0, 1]: the product of the two Gaussians is a
  // Gaussian in t centered at 0.5 with sd h/sqrt2, so the integral is the
  // full-line value times erf(0.5/h).
  const double s = 0.2 * std::sqrt(2.0);
  const double cont = std::exp(-0.5 * (0.4 / s) * (0.4 / s)) /
                      std::sqrt(2.0 * 3.14159265358979323846) / s * 0.2 *
                      std::erf(0.5 / 0.2);
  CHECK(a == doctest::Approx(cont).epsilon(1e-6));
}

TEST_CASE("for_cells_near visits every contributing cell")
{
  for (std::size_t k : { 1u, 7u, 100u, 1000u }) {
    for (double x : { 0.0, 0.0137, 0.5, 0.999, 1.0 }) {
      for (double radius : { 0.001, 0.05, 0.3, 2.0 }) {
        std::vector<int> seen(k, 0);
        for_cells_near(x, radius, k, [&](std::size_t r) { ++seen[r]; });
        for (std::size_t r = 0; r < k; ++r) {
          REQUIRE(seen[r] <= 1);
          if (std::abs(x - cell_center(r, k)) <= radius) {
            REQUIRE(seen[r] == 1);
          }
        }
      }
    }
  }
}
