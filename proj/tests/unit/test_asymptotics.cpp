#include "oracles.hpp"

#include "kfrontier/asymptotics.hpp"
#include "kfrontier/error.hpp"
#include "kfrontier/rng.hpp"
#include "kfrontier/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace kfrontier;

namespace {

// Least-squares slope of log y on log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

} // namespace

TEST_CASE("cell_max_cdf examples")
{
  const auto p = make_partition(make_frontier("flat:1"), 10);
  const auto v = cell_max_cdf(p, 3, 100.0, 0.9);
  CHECK(v.exact());
  CHECK(v.lower == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(v.lower == doctest::Approx(0.367879441171442).epsilon(1e-13));
  CHECK(cell_max_cdf(p, 0, 100.0, -0.01).upper == 0.0);
  CHECK(cell_max_cdf(p, 0, 100.0, 1.01).lower == 1.0);
  CHECK(cell_max_cdf(p, 9, 100.0, 1.0).lower == 1.0);
  CHECK(cell_max_cdf(p, 0, 100.0, 0.0).lower ==
        doctest::Approx(std::exp(-10.0)).epsilon(1e-14));
  CHECK_THROWS_AS(cell_max_cdf(p, 10, 100.0, 0.5), ConfigError);
}

TEST_CASE("cell_max_cdf is a nondecreasing CDF with an explicit unknown band")
{
  const auto f = make_frontier("sine:1:0.3:6");
  const auto p = make_partition(f, 8);
  for (std::size_t r = 0; r < 8; ++r) {
    double prev_lo = 0.0;
    double prev_hi = 0.0;
    for (int i = -10; i <= 1400; ++i) {
      const double x = i / 1000.0;
      const auto v = cell_max_cdf(p, r, 500.0, x);
      REQUIRE(v.lower <= v.upper);
      REQUIRE(v.lower >= prev_lo);
      REQUIRE(v.upper >= prev_hi);
      REQUIRE(v.upper <= 1.0);
      if (x > p.mins[r] && x <= p.maxs[r]) {
        REQUIRE(!v.exact());
        // The interval must enclose exp(-n c int_cell (f - x)_+).
        const double lo = r / 8.0;
        const double excess = oracle::integrate(
          [&](double t) { return std::max(0.0, eval_frontier(f, t) - x); }, lo,
          lo + 0.125, 1e-13);
        const double truth = std::exp(-500.0 * p.normalizer * excess);
        REQUIRE(truth >= v.lower * (1.0 - 1e-9));
        REQUIRE(truth <= v.upper * (1.0 + 1e-9));
      } else {
        REQUIRE(v.exact());
      }
      prev_lo = v.lower;
      prev_hi = v.upper;
    }
  }
}

TEST_CASE("expected_cell_max_flat examples")
{
  const auto m = expected_cell_max_flat(1.0, 100.0, 10, 1.0);
  CHECK(m.mean == doctest::Approx(0.9000045399929762).epsilon(1e-14));
  // Oracle: integrate the survival function and x times it.
  const auto cdf = [](double x) { return std::exp(10.0 * (x - 1.0)); };
  const double mean = oracle::integrate([&](double x) { return 1.0 - cdf(x); },
                                        0.0, 1.0);
  const double second = oracle::integrate(
    [&](double x) { return 2.0 * x * (1.0 - cdf(x)); }, 0.0, 1.0);
  CHECK(m.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(m.variance == doctest::Approx(second - mean * mean).epsilon(1e-10));

  for (double n : { 1e2, 1e3, 1e4, 1e5 }) {
    for (double level : { 0.5, 1.0, 2.0 }) {
      const double c = 1.0 / level;
      const auto mm = expected_cell_max_flat(level, n, 10, c);
      const double kn = 10.0 / (n * c);
      CHECK(std::abs(mm.mean - (level - kn)) <=
            kn * std::exp(-n * c * level / 10.0) + 1e-15);
      CHECK(mm.variance == doctest::Approx(kn * kn).epsilon(1e-3));
    }
  }
  CHECK(expected_cell_max_flat(1.0, 1e9, 10, 1.0).mean ==
        doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Monte Carlo cell maxima agree with the flat closed form")
{
  const auto f = make_frontier("flat:1");
  for (auto [n, k] : { std::pair{ 1e3, std::size_t{ 10 } },
                       std::pair{ 1e4, std::size_t{ 100 } } }) {
    std::vector<double> xs;
    for (std::uint64_t j = 0; j < 2000; ++j) {
      xs.push_back(sample_cell_maxima(f, n, k, derive_seed(40, { j })).values[k / 2]);
    }
    const auto ref = expected_cell_max_flat(1.0, n, k, 1.0);
    CHECK(std::abs(mean(xs) - ref.mean) < 4.0 * standard_error(xs));
  }
}

TEST_CASE("Monte Carlo variance of a cell maximum")
{
  const auto f = make_frontier("flat:1");
  std::vector<double> xs;
  for (std::uint64_t j = 0; j < 5000; ++j) {
    xs.push_back(sample_cell_maxima(f, 1e4, 100, derive_seed(41, { j })).values[0]);
  }
  const auto ref = expected_cell_max_flat(1.0, 1e4, 100, 1.0);
  CHECK(sample_moments(xs).variance == doctest::Approx(ref.variance).epsilon(0.1));
}

TEST_CASE("smoothed_frontier examples")
{
  for (const auto* k : { &kernels::triangular(), &kernels::epanechnikov(),
                         &kernels::biweight(), &kernels::uniform() }) {
    CAPTURE(k->id());
    CHECK(smoothed_frontier(make_frontier("flat:1"), *k, 0.05, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(smoothed_frontier(make_frontier("affine:1:1"), *k, 0.05, 0.5) ==
          doctest::Approx(1.5).epsilon(1e-6));
  }
  CHECK(smoothed_frontier(make_frontier("flat:1"), kernels::uniform(), 0.1, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(smoothed_frontier(make_frontier("flat:1"), kernels::gaussian(), 0.01, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("smoothed_frontier agrees with a direct convolution")
{
  const auto f = make_frontier("tent:1:0.5:0.3");
  for (const auto& name : kernel_names()) {
    const auto& k = kernel_by_name(name);
    for (double x : { 0.0, 0.02, 0.3, 0.71, 1.0 }) {
      CAPTURE(name);
      CAPTURE(x);
      const double h = 0.07;
      const double ref = oracle::integrate(
        [&](double y) { return k((x - y) / h) / h * f(y); }, 0.0, 1.0, 1e-12,
        1000);
      CHECK(smoothed_frontier(f, k, h, x) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("discretized_smoothed_frontier")
{
  const auto flat = make_frontier("flat:1");
  for (const auto& name : kernel_names()) {
    const auto& k = kernel_by_name(name);
    for (double x : { 0.0, 0.33, 1.0 }) {
      CHECK(discretized_smoothed_frontier(flat, k, 0.1, 64, x) ==
            doctest::Approx(kernel_riemann_sum(k, 0.1, 64, x)).epsilon(1e-14));
    }
  }
  const auto sine = make_frontier("sine:1:0.3:6");
  const auto& bw = kernels::biweight();
  const double g = smoothed_frontier(sine, bw, 0.1, 0.5);
  const double coarse = std::abs(discretized_smoothed_frontier(sine, bw, 0.1, 100, 0.5) - g);
  const double fine = std::abs(discretized_smoothed_frontier(sine, bw, 0.1, 400, 0.5) - g);
  CHECK(fine < coarse);
}

TEST_CASE("discretization bias shrinks like h^alpha")
{
  const std::vector<double> hs{ 0.2, 0.1, 0.05, 0.025 };
  const auto& bw = kernels::biweight();
  const auto bias_slope = [&](const FrontierSpec& f, double x) {
    std::vector<double> bias;
    for (double h : hs) {
      // Fixed k h = 40 keeps the Riemann defect negligible.
      const auto k = static_cast<std::size_t>(std::lround(40.0 / h));
      bias.push_back(std::abs(discretized_smoothed_frontier(f, bw, h, k, x) - f(x)));
    }
    return loglog_slope(hs, bias);
  };
  // Smooth frontier: the bound O(h) holds with room to spare (second order).
  const auto sine = make_frontier("sine:1:0.3:6");
  CHECK(bias_slope(sine, 0.5) >= sine.alpha() - 0.3);
  // At a kink the bound is attained.
  const auto tent = make_frontier("tent:1:0.5:0.5");
  CHECK(bias_slope(tent, 0.5) == doctest::Approx(tent.alpha()).epsilon(0.3));
  const auto cusp = make_frontier("cusp:1:0.4:0.5");
  CHECK(std::abs(bias_slope(cusp, 0.5) - cusp.alpha()) < 0.3);
}

TEST_CASE("normalization examples")
{
  const auto p = normalization(1000.0, 100, 0.04, kernels::biweight(), 1.0);
  CHECK(p.sigma_n == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(normalization(10.0, 4, 0.5, kernels::uniform(), 1.0).sigma == 1.0);
  CHECK(normalization(10.0, 4, 0.5, kernels::epanechnikov(), 2.0).sigma ==
        doctest::Approx(std::sqrt(0.6) / 2.0).epsilon(1e-15));
  const auto q = normalization(2000.0, 100, 0.04, kernels::biweight(), 1.0);
  CHECK(q.sigma_n == p.sigma_n / 2.0);
  CHECK_THROWS_AS(normalization(0.0, 100, 0.04, kernels::biweight(), 1.0),
                  ConfigError);
}

TEST_CASE("normalization is homogeneous in n")
{
  for (double a : { 0.5, 2.0, 4.0 }) {
    const auto p = normalization(1234.0, 77, 0.031, kernels::biweight(), 1.0);
    const auto q = normalization(a * a * 1234.0, 77, 0.031, kernels::biweight(), 1.0);
    CHECK(q.sigma_n == p.sigma_n / (a * a));
  }
  const auto p = normalization(1234.0, 77, 0.031, kernels::biweight(), 1.0);
  const auto q = normalization(9.0 * 1234.0, 77, 0.031, kernels::biweight(), 1.0);
  CHECK(q.sigma_n == doctest::Approx(p.sigma_n / 9.0).epsilon(1e-15));
}

TEST_CASE("select_hyperparams examples")
{
  const auto c = select_hyperparams(1000.0, 1.0, SelectorMode::mse_corrected);
  CHECK(c.k == 100);
  CHECK(c.h == doctest::Approx(0.04642).epsilon(1e-4));
  CHECK(c.h == doctest::Approx(std::pow(1000.0, -4.0 / 9.0)).epsilon(1e-15));
  const auto r = select_hyperparams(1000.0, 1.0, SelectorMode::mse_raw);
  CHECK(r.k == 63);
  CHECK(r.h == doctest::Approx(0.06310).epsilon(1e-4));
  CHECK_THROWS_AS(select_hyperparams(1.0, 1.0, SelectorMode::mse_raw), ConfigError);
  CHECK_THROWS_AS(select_hyperparams(100.0, 0.0, SelectorMode::mse_raw), ConfigError);
  CHECK_THROWS_AS(select_hyperparams(100.0, 1.5, SelectorMode::mse_raw), ConfigError);
}

TEST_CASE("select_hyperparams stays in range")
{
  for (auto mode : { SelectorMode::mse_raw, SelectorMode::mse_corrected }) {
    for (double alpha : { 0.05, 0.3, 0.5, 0.8, 1.0 }) {
      for (double n = 2.0; n < 1e8; n *= 1.37) {
        const auto hp = select_hyperparams(n, alpha, mode);
        REQUIRE(hp.k >= 1);
        REQUIRE(static_cast<double>(hp.k) < n);
        REQUIRE(hp.h > 0.0);
        REQUIRE(hp.h < 1.0);
      }
    }
  }
}

TEST_CASE("target slopes")
{
  CHECK(target_l1_slope(1.0, SelectorMode::mse_raw) == doctest::Approx(-0.4));
  CHECK(target_l1_slope(1.0, SelectorMode::mse_corrected) ==
        doctest::Approx(-4.0 / 9.0));
}

TEST_CASE("regime_report")
{
  const auto& bw = kernels::biweight();
  const auto hp = select_hyperparams(1e5, 1.0, SelectorMode::mse_raw);
  const auto rep = regime_report(1e5, hp.k, hp.h, 1.0, bw);
  CHECK(rep.situation == Situation::B);
  CHECK(rep.warnings.empty());
  bool found = false;
  for (const auto& p : rep.proxies) {
    CHECK(std::isfinite(p.value));
    CHECK(p.value > 0.0);
    if (p.name == "h*k") {
      found = true;
      CHECK(p.value > 5.0);
    }
  }
  CHECK(found);
  CHECK(rep.corrected_limit_proxies.size() == 2);

  const auto uni = regime_report(1e5, hp.k, hp.h, 1.0, kernels::uniform());
  CHECK(uni.situation == Situation::none);
  REQUIRE(!uni.warnings.empty());
  CHECK(uni.warnings.front().find("discontinuous") != std::string::npos);

  const auto gauss = regime_report(1e5, hp.k, hp.h, 1.0, kernels::gaussian());
  CHECK(gauss.situation == Situation::A);

  const auto full = regime_report(1e4, 10000, 0.01, 1.0, bw);
  bool saw = false;
  for (const auto& w : full.warnings) {
    saw = saw || w.find("k*ln(n)/n") != std::string::npos;
  }
  CHECK(saw);
}

TEST_CASE("selected schedules leave the regime as n grows")
{
  const auto& bw = kernels::biweight();
  for (auto mode : { SelectorMode::mse_raw, SelectorMode::mse_corrected }) {
    std::vector<double> hk;
    std::vector<double> kln;
    for (double n : { 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8 }) {
      const auto hp = select_hyperparams(n, 1.0, mode);
      const auto rep = regime_report(n, hp.k, hp.h, 1.0, bw);
      for (const auto& p : rep.proxies) {
        if (p.name == "h*k") {
          hk.push_back(p.value);
        }
        if (p.name == "k*ln(n)/n") {
          kln.push_back(p.value);
        }
      }
      if (n >= (mode == SelectorMode::mse_raw ? 1e5 : 1e6)) {
        CAPTURE(n);
        CHECK(rep.warnings.empty());
      }
    }
    for (std::size_t i = 1; i < hk.size(); ++i) {
      CHECK(hk[i] > hk[i - 1]);
      CHECK(kln[i] < kln[i - 1]);
    }
  }
}

TEST_CASE("confidence_interval examples")
{
  const AsymptoticParams p{ 0.05, 1.0, 1000.0, 100, 0.04 };
  const auto ci = confidence_interval(1.0, p, 0.95);
  CHECK(ci.lo == doctest::Approx(1.0 - 1.959963984540054 * 0.05).epsilon(1e-14));
  CHECK(ci.hi == doctest::Approx(1.0 + 1.959963984540054 * 0.05).epsilon(1e-14));
  CHECK(ci.lo == doctest::Approx(0.902).epsilon(1e-3));
  CHECK(ci.hi == doctest::Approx(1.098).epsilon(1e-3));
  const auto tiny = confidence_interval(1.0, p, 1e-12);
  CHECK(tiny.hi - tiny.lo < 1e-12);
  const AsymptoticParams wide{ 1.0, 1.0, 10.0, 5, 0.5 };
  CHECK(confidence_interval(0.01, wide, 0.95).lo == 0.0);
  CHECK_THROWS_AS(confidence_interval(1.0, p, 1.0), ConfigError);
  CHECK_THROWS_AS(confidence_interval(1.0, p, 0.0), ConfigError);
}

TEST_CASE("plug-in normalizer")
{
  EstimateResult r;
  for (int i = 0; i <= 100; ++i) {
    r.x.push_back(i / 100.0);
    r.estimate.push_back(2.0);
    r.truth.push_back(2.0);
  }
  CHECK(plugin_normalizer(r) == doctest::Approx(0.5).epsilon(1e-14));
  std::fill(r.estimate.begin(), r.estimate.end(), 0.0);
  CHECK_THROWS_AS(plugin_normalizer(r), DegenerateSample);
}
