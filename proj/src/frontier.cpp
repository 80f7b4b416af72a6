#include "kfrontier/frontier.hpp"

#include "kfrontier/error.hpp"
#include "kfrontier/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace kfrontier {

namespace {

constexpr double area_rel_tol = 1e-10;
constexpr std::size_t validation_grid = 2049;

std::string shortest(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string make_id(std::string_view family, std::initializer_list<double> params)
{
  std::string id(family);
  for (double p : params) {
    id += ':';
    id += shortest(p);
  }
  return id;
}

} // namespace

FrontierSpec::FrontierSpec(std::string id,
                           Function f,
                           double alpha,
                           double lipschitz_const,
                           double lower_bound,
                           double upper_bound,
                           Extras extras)
  : id_(std::move(id))
  , f_(std::move(f))
  , alpha_(alpha)
  , lipschitz_(lipschitz_const)
  , lower_(lower_bound)
  , upper_(upper_bound)
  , extras_(std::move(extras))
{
  if (!f_) {
    throw ConfigError("frontier " + id_ + ": missing function");
  }
  if (!(alpha_ > 0.0 && alpha_ <= 1.0)) {
    throw ConfigError("frontier " + id_ + ": alpha must lie in (0, 1]");
  }
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
    throw ConfigError("frontier " + id_ + ": Lipschitz constant must be >= 0");
  }
  if (!(lower_ > 0.0) || !(upper_ >= lower_) || !std::isfinite(upper_)) {
    throw ConfigError("frontier " + id_ + ": bounds must satisfy 0 < m <= M");
  }
  const double slack = 1e-12 * upper_;
  for (std::size_t i = 0; i < validation_grid; ++i) {
    const double x = static_cast<double>(i) / (validation_grid - 1);
    const double y = f_(x);
    if (!(y >= lower_ - slack && y <= upper_ + slack)) {
      throw ConfigError("frontier " + id_ + ": f(" + shortest(x) + ") = " +
                        shortest(y) + " violates m <= f <= M");
    }
  }
  if (extras_.exact_area) {
    area_ = *extras_.exact_area;
  } else {
    area_ = integrate_piecewise(f_, 0.0, 1.0, extras_.kinks, area_rel_tol,
                                "area of frontier " + id_)
              .value;
  }
  if (!(area_ > 0.0)) {
    throw ConfigError("frontier " + id_ + ": nonpositive area");
  }
}

double FrontierSpec::integral(double a, double b) const
{
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  if (b <= a) {
    return 0.0;
  }
  if (extras_.primitive) {
    return extras_.primitive(b) - extras_.primitive(a);
  }
  return integrate_piecewise(f_, a, b, extras_.kinks, area_rel_tol,
                             "cell integral of frontier " + id_)
    .value;
}

Extrema FrontierSpec::extrema(double a, double b) const
{
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  if (extras_.extrema) {
    return extras_.extrema(a, b);
  }
  constexpr int samples = 65;
  double lo = f_(a);
  double hi = lo;
  for (int i = 1; i < samples; ++i) {
    const double y = f_(a + (b - a) * i / (samples - 1));
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  const double slack =
    lipschitz_ * std::pow(0.5 * (b - a) / (samples - 1), alpha_);
  return { std::max(lower_, lo - slack), std::min(upper_, hi + slack) };
}

FrontierSpec FrontierSpec::scaled(double s) const
{
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw ConfigError("frontier scale factor must be positive");
  }
  Extras extras;
  extras.kinks = extras_.kinks;
  if (extras_.exact_area) {
    extras.exact_area = s * *extras_.exact_area;
  }
  if (extras_.primitive) {
    extras.primitive = [p = extras_.primitive, s](double x) { return s * p(x); };
  }
  if (extras_.extrema) {
    extras.extrema = [e = extras_.extrema, s](double a, double b) {
      const auto ex = e(a, b);
      return Extrema{ s * ex.min, s * ex.max };
    };
  }
  return FrontierSpec(
    shortest(s) + "*" + id_, [f = f_, s](double x) { return s * f(x); },
    alpha_, s * lipschitz_, s * lower_, s * upper_, std::move(extras));
}

double eval_frontier(const FrontierSpec& spec, double x)
{
  return spec(x);
}

AreaResult region_area(const FrontierSpec& spec)
{
  return { spec.area(), spec.normalizer() };
}

double lipschitz_audit(const std::function<double(double)>& f,
                       double alpha,
                       std::size_t grid_size)
{
  if (grid_size < 2) {
    throw ConfigError("lipschitz_audit: grid_size must be >= 2");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("lipschitz_audit: alpha must lie in (0, 1]");
  }
  std::vector<double> xs(grid_size);
  std::vector<double> ys(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    xs[i] = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    ys[i] = f(xs[i]);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    for (std::size_t j = i + 1; j < grid_size; ++j) {
      const double ratio =
        std::fabs(ys[j] - ys[i]) / std::pow(xs[j] - xs[i], alpha);
      worst = std::max(worst, ratio);
    }
  }
  return worst;
}

double lipschitz_audit(const FrontierSpec& spec, std::size_t grid_size)
{
  return lipschitz_audit([&spec](double x) { return spec(x); }, spec.alpha(),
                         grid_size);
}

namespace catalog {

FrontierSpec flat(double level)
{
  FrontierSpec::Extras extras;
  extras.exact_area = level;
  extras.primitive = [level](double x) { return level * x; };
  extras.extrema = [level](double, double) { return Extrema{ level, level }; };
  return FrontierSpec(make_id("flat", { level }),
                      [level](double) { return level; }, 1.0, 0.0, level,
                      level, std::move(extras));
}

FrontierSpec affine(double a, double b)
{
  const auto f = [a, b](double x) { return a + b * x; };
  FrontierSpec::Extras extras;
  extras.exact_area = a + 0.5 * b;
  extras.primitive = [a, b](double x) { return a * x + 0.5 * b * x * x; };
  extras.extrema = [f](double lo, double hi) {
    return Extrema{ std::min(f(lo), f(hi)), std::max(f(lo), f(hi)) };
  };
  return FrontierSpec(make_id("affine", { a, b }), f, 1.0, std::fabs(b),
                      std::min(a, a + b), std::max(a, a + b),
                      std::move(extras));
}

FrontierSpec sine(double a, double b, double omega)
{
  if (omega == 0.0) {
    return flat(a);
  }
  const auto f = [a, b, omega](double x) { return a + b * std::sin(omega * x); };
  const auto extrema = [f, omega](double lo, double hi) {
    double mn = std::min(f(lo), f(hi));
    double mx = std::max(f(lo), f(hi));
    // Critical points: omega x = pi/2 + j pi.
    const double t0 = std::min(omega * lo, omega * hi);
    const double t1 = std::max(omega * lo, omega * hi);
    const double pi = std::numbers::pi;
    for (double j = std::ceil((t0 - pi / 2) / pi);
         j <= std::floor((t1 - pi / 2) / pi); j += 1.0) {
      const double x = std::clamp((pi / 2 + j * pi) / omega, lo, hi);
      mn = std::min(mn, f(x));
      mx = std::max(mx, f(x));
    }
    return Extrema{ mn, mx };
  };
  const auto whole = extrema(0.0, 1.0);
  FrontierSpec::Extras extras;
  extras.exact_area = a + b * (1.0 - std::cos(omega)) / omega;
  extras.primitive = [a, b, omega](double x) {
    return a * x - b * std::cos(omega * x) / omega;
  };
  extras.extrema = extrema;
  return FrontierSpec(make_id("sine", { a, b, omega }), f, 1.0,
                      std::fabs(b * omega), whole.min, whole.max,
                      std::move(extras));
}

FrontierSpec tent(double a, double b, double peak)
{
  if (!(peak > 0.0 && peak < 1.0)) {
    throw ConfigError("tent frontier: peak must lie in (0, 1)");
  }
  const auto f = [a, b, peak](double x) {
    return x <= peak ? a + b * x / peak : a + b * (1.0 - x) / (1.0 - peak);
  };
  FrontierSpec::Extras extras;
  extras.exact_area = a + 0.5 * b;
  extras.primitive = [a, b, peak](double x) {
    if (x <= peak) {
      return a * x + b * x * x / (2.0 * peak);
    }
    const double q = 1.0 - peak;
    return a * x + b * peak / 2.0 + b * (q * q - (1.0 - x) * (1.0 - x)) / (2.0 * q);
  };
  extras.extrema = [f, peak](double lo, double hi) {
    double mn = std::min(f(lo), f(hi));
    double mx = std::max(f(lo), f(hi));
    if (peak > lo && peak < hi) {
      mn = std::min(mn, f(peak));
      mx = std::max(mx, f(peak));
    }
    return Extrema{ mn, mx };
  };
  extras.kinks = { peak };
  return FrontierSpec(make_id("tent", { a, b, peak }), f, 1.0,
                      std::fabs(b) / std::min(peak, 1.0 - peak),
                      std::min(a, a + b), std::max(a, a + b), std::move(extras));
}

FrontierSpec cusp(double a, double b, double alpha)
{
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("cusp frontier: alpha must lie in (0, 1]");
  }
  const auto f = [a, b, alpha](double x) {
    return a + b * std::pow(std::fabs(x - 0.5), alpha);
  };
  const double reach = b * std::pow(0.5, alpha);
  FrontierSpec::Extras extras;
  extras.exact_area = a + reach / (alpha + 1.0);
  extras.primitive = [a, b, alpha](double x) {
    const double d = std::pow(std::fabs(x - 0.5), alpha + 1.0) / (alpha + 1.0);
    return a * x + (x >= 0.5 ? b * d : -b * d);
  };
  extras.extrema = [f](double lo, double hi) {
    double mn = std::min(f(lo), f(hi));
    double mx = std::max(f(lo), f(hi));
    if (lo < 0.5 && hi > 0.5) {
      mn = std::min(mn, f(0.5));
      mx = std::max(mx, f(0.5));
    }
    return Extrema{ mn, mx };
  };
  extras.kinks = { 0.5 };
  return FrontierSpec(make_id("cusp", { a, b, alpha }), f, alpha,
                      std::fabs(b), std::min(a, a + reach),
                      std::max(a, a + reach), std::move(extras));
}

FrontierSpec weierstrass(double a, double b, double alpha, int terms)
{
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("weierstrass frontier: alpha must lie in (0, 1]");
  }
  if (terms < 1 || terms > 40) {
    throw ConfigError("weierstrass frontier: terms must lie in [1, 40]");
  }
  const auto f = [a, b, alpha, terms](double x) {
    double sum = 0.0;
    for (int j = 0; j < terms; ++j) {
      const double freq = std::ldexp(1.0, j);
      sum += std::pow(freq, -alpha) * std::cos(freq * std::numbers::pi * x);
    }
    return a + b * sum;
  };
  double amplitude = 0.0;
  for (int j = 0; j < terms; ++j) {
    amplitude += std::pow(2.0, -j * alpha);
  }
  // Each term is bounded by min(2, 2^j pi d) 2^{-j alpha} <= 2^{1-alpha}
  // pi^alpha d^alpha, hence the (loose) Hoelder constant below.
  const double lipschitz = std::fabs(b) * terms * std::pow(2.0, 1.0 - alpha) *
                           std::pow(std::numbers::pi, alpha);
  FrontierSpec::Extras extras;
  extras.exact_area = a;
  extras.primitive = [a, b, alpha, terms](double x) {
    double sum = 0.0;
    for (int j = 0; j < terms; ++j) {
      const double w = std::ldexp(1.0, j) * std::numbers::pi;
      sum += std::pow(2.0, -j * alpha) * std::sin(w * x) / w;
    }
    return a * x + b * sum;
  };
  return FrontierSpec(make_id("weierstrass", { a, b, alpha, double(terms) }), f,
                      alpha, lipschitz, a - std::fabs(b) * amplitude,
                      a + std::fabs(b) * amplitude, std::move(extras));
}

} // namespace catalog

FrontierSpec make_frontier(std::string_view name)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = name.find(':', start);
    parts.push_back(name.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  const auto family = parts.front();
  std::vector<double> p;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    double v = 0.0;
    const auto s = parts[i];
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ConfigError("frontier '" + std::string(name) +
                        "': cannot parse parameter '" + std::string(s) + "'");
    }
    p.push_back(v);
  }
  const auto expect = [&](std::size_t count, std::string_view usage) {
    if (p.size() != count) {
      throw ConfigError("frontier '" + std::string(name) + "': expected " +
                        std::string(usage));
    }
  };
  if (family == "flat") {
    expect(1, "flat:<level>");
    return catalog::flat(p[0]);
  }
  if (family == "affine") {
    expect(2, "affine:<a>:<b>");
    return catalog::affine(p[0], p[1]);
  }
  if (family == "sine") {
    expect(3, "sine:<a>:<b>:<omega>");
    return catalog::sine(p[0], p[1], p[2]);
  }
  if (family == "tent") {
    expect(3, "tent:<a>:<b>:<peak>");
    return catalog::tent(p[0], p[1], p[2]);
  }
  if (family == "cusp") {
    expect(3, "cusp:<a>:<b>:<alpha>");
    return catalog::cusp(p[0], p[1], p[2]);
  }
  if (family == "weierstrass") {
    expect(4, "weierstrass:<a>:<b>:<alpha>:<terms>");
    if (p[3] != std::floor(p[3])) {
      throw ConfigError("frontier '" + std::string(name) +
                        "': terms must be an integer");
    }
    return catalog::weierstrass(p[0], p[1], p[2], static_cast<int>(p[3]));
  }
  throw ConfigError("unknown frontier family '" + std::string(family) +
                    "' (expected flat, affine, sine, tent, cusp, weierstrass)");
}

} // namespace kfrontier
