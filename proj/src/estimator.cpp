#include "kfrontier/estimator.hpp"

#include "kfrontier/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace kfrontier {

namespace {

struct KernelSums
{
  double weighted = 0.0;
  double weights = 0.0;
};

KernelSums direct_sums(const CellMaxima& maxima,
                       const KernelSpec& kernel,
                       double h,
                       double x)
{
  const std::size_t k = maxima.k();
  KernelSums sums;
  for_cells_near(x, kernel.support_radius() * h, k, [&](std::size_t r) {
    const double w = kernel((x - cell_center(r, k)) / h) / h;
    sums.weighted += w * maxima.values[r];
    sums.weights += w;
  });
  return sums;
}

// Adds the reflected terms K_h(x + x_r) and K_h(x + x_r - 2).
void add_reflections(const CellMaxima& maxima,
                     const KernelSpec& kernel,
                     double h,
                     double x,
                     KernelSums& sums)
{
  const std::size_t k = maxima.k();
  const double radius = kernel.support_radius() * h;
  for_cells_near(-x, radius, k, [&](std::size_t r) {
    const double w = kernel((x + cell_center(r, k)) / h) / h;
    sums.weighted += w * maxima.values[r];
    sums.weights += w;
  });
  for_cells_near(2.0 - x, radius, k, [&](std::size_t r) {
    const double w = kernel((x + cell_center(r, k) - 2.0) / h) / h;
    sums.weighted += w * maxima.values[r];
    sums.weights += w;
  });
}

void check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidBandwidth("bandwidth must be positive and finite, got " +
                           std::to_string(h));
  }
}

void check_cells(const CellMaxima& maxima, const EstimatorConfig& cfg)
{
  if (maxima.k() != cfg.cells) {
    throw ConfigError("estimator configured for " + std::to_string(cfg.cells) +
                      " cells but maxima cover " +
                      std::to_string(maxima.k()));
  }
}

double checked_zn(const CellMaxima& maxima, double n)
{
  const double k = static_cast<double>(maxima.k());
  if (!(n > k)) {
    throw ConfigError("bias correction requires n > k (n = " +
                      std::to_string(n) + ", k = " + std::to_string(maxima.k()) +
                      ")");
  }
  return maxima.sum() / (n - k);
}

} // namespace

std::size_t cell_index(double x, std::size_t k)
{
  if (k == 0) {
    throw ConfigError("cell count must be >= 1");
  }
  if (!(x > 0.0)) {
    return 0;
  }
  if (x >= 1.0) {
    return k - 1;
  }
  const double kd = static_cast<double>(k);
  const double p = x * kd;
  const double rounding = std::fma(x, kd, -p);
  double r = std::floor(p);
  if (p == r && rounding < 0.0) {
    r -= 1.0;
  }
  return std::min(static_cast<std::size_t>(std::max(r, 0.0)), k - 1);
}

CellPartition make_partition(const FrontierSpec& spec, std::size_t k)
{
  if (k == 0) {
    throw ConfigError("make_partition: k must be >= 1");
  }
  CellPartition part;
  part.k = k;
  part.normalizer = spec.normalizer();
  part.centers.resize(k);
  part.measures.resize(k);
  part.mins.resize(k);
  part.maxs.resize(k);
  for (std::size_t r = 0; r < k; ++r) {
    const double a = part.lower_edge(r);
    const double b = part.upper_edge(r);
    part.centers[r] = cell_center(r, k);
    part.measures[r] = spec.integral(a, b);
    const auto ex = spec.extrema(a, b);
    part.mins[r] = ex.min;
    part.maxs[r] = ex.max;
  }
  return part;
}

double CellMaxima::sum() const
{
  double s = 0.0;
  for (double v : values) {
    s += v;
  }
  return s;
}

CellMaxima cell_maxima(std::span<const Point> points, std::size_t k)
{
  if (k == 0) {
    throw ConfigError("cell_maxima: k must be >= 1");
  }
  CellMaxima out;
  out.values.assign(k, 0.0);
  std::vector<bool> seen(k, false);
  for (const auto& p : points) {
    if (!(p.x >= 0.0 && p.x <= 1.0) || !(p.y >= 0.0)) {
      throw ConfigError("point (" + std::to_string(p.x) + ", " +
                        std::to_string(p.y) + ") lies outside the support");
    }
    const std::size_t r = cell_index(p.x, k);
    out.values[r] = std::max(out.values[r], p.y);
    seen[r] = true;
  }
  for (std::size_t r = 0; r < k; ++r) {
    if (!seen[r]) {
      out.empty_cells.push_back(r);
    }
  }
  return out;
}

CellMaxima cell_maxima(const PointSet& points, const CellPartition& partition)
{
  return cell_maxima(points.points, partition.k);
}

CellMaxima sample_cell_maxima(const FrontierSpec& spec,
                              double n,
                              std::size_t k,
                              std::uint64_t seed)
{
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw ConfigError("sample_cell_maxima: n must be >= 1");
  }
  if (k == 0) {
    throw ConfigError("sample_cell_maxima: k must be >= 1");
  }
  Rng rng(seed);
  const std::uint64_t count = rng.poisson(n);
  CellMaxima out;
  out.values.assign(k, 0.0);
  std::vector<bool> seen(k, false);
  sample_uniform_on_support(spec, count, rng, [&](Point p) {
    const std::size_t r = cell_index(p.x, k);
    out.values[r] = std::max(out.values[r], p.y);
    seen[r] = true;
  });
  for (std::size_t r = 0; r < k; ++r) {
    if (!seen[r]) {
      out.empty_cells.push_back(r);
    }
  }
  return out;
}

std::string_view to_string(Correction c)
{
  switch (c) {
    case Correction::raw:
      return "raw";
    case Correction::bias_corrected:
      return "bias_corrected";
    case Correction::edge_corrected:
      return "edge_corrected";
  }
  return "unknown";
}

Correction correction_from_string(std::string_view name)
{
  if (name == "raw") {
    return Correction::raw;
  }
  if (name == "bias" || name == "bias_corrected") {
    return Correction::bias_corrected;
  }
  if (name == "edge" || name == "edge_corrected") {
    return Correction::edge_corrected;
  }
  throw ConfigError("unknown correction '" + std::string(name) +
                    "' (expected raw, bias, edge)");
}

void validate(const EstimatorConfig& cfg, double n)
{
  check_bandwidth(cfg.bandwidth);
  if (cfg.cells == 0) {
    throw ConfigError("cell count k must be >= 1");
  }
  if (cfg.correction != Correction::raw &&
      !(n > static_cast<double>(cfg.cells))) {
    throw ConfigError("correction '" + std::string(to_string(cfg.correction)) +
                      "' requires k < n (k = " + std::to_string(cfg.cells) +
                      ", n = " + std::to_string(n) + ")");
  }
  if (cfg.correction == Correction::edge_corrected && !cfg.kernel.compact()) {
    throw UnsupportedKernel("edge correction requires a compactly supported "
                            "kernel; '" +
                            cfg.kernel.id() + "' is not");
  }
}

double estimate_fhat(const CellMaxima& maxima,
                     const EstimatorConfig& cfg,
                     double x)
{
  check_bandwidth(cfg.bandwidth);
  check_cells(maxima, cfg);
  const auto sums = direct_sums(maxima, cfg.kernel, cfg.bandwidth, x);
  return sums.weighted / static_cast<double>(maxima.k());
}

double estimate_geffroy(const CellMaxima& maxima, double x)
{
  return maxima.values.at(cell_index(x, maxima.k()));
}

double estimate_geffroy(const CellMaxima& maxima,
                        const CellPartition& partition,
                        double x)
{
  if (partition.k != maxima.k()) {
    throw ConfigError("partition and maxima disagree on the cell count");
  }
  return estimate_geffroy(maxima, x);
}

double bias_correction_zn(const CellMaxima& maxima, double n)
{
  return checked_zn(maxima, n);
}

double estimate_ftilde(const CellMaxima& maxima,
                       const EstimatorConfig& cfg,
                       double n,
                       double x)
{
  check_bandwidth(cfg.bandwidth);
  check_cells(maxima, cfg);
  const double zn = checked_zn(maxima, n);
  const auto sums = direct_sums(maxima, cfg.kernel, cfg.bandwidth, x);
  return (sums.weighted + zn * sums.weights) /
         static_cast<double>(maxima.k());
}

double estimate_fcheck(const CellMaxima& maxima,
                       const EstimatorConfig& cfg,
                       double n,
                       double x)
{
  check_bandwidth(cfg.bandwidth);
  check_cells(maxima, cfg);
  if (!cfg.kernel.compact()) {
    throw UnsupportedKernel("edge correction requires a compactly supported "
                            "kernel; '" +
                            cfg.kernel.id() + "' is not");
  }
  const double zn = checked_zn(maxima, n);
  auto sums = direct_sums(maxima, cfg.kernel, cfg.bandwidth, x);
  add_reflections(maxima, cfg.kernel, cfg.bandwidth, x, sums);
  return (sums.weighted + zn * sums.weights) /
         static_cast<double>(maxima.k());
}

FrontierEstimate::FrontierEstimate(CellMaxima maxima,
                                   EstimatorConfig cfg,
                                   double n)
  : maxima_(std::move(maxima))
  , cfg_(std::move(cfg))
  , n_(n)
{
  validate(cfg_, n_);
  check_cells(maxima_, cfg_);
  zn_ = n_ > static_cast<double>(maxima_.k())
          ? maxima_.sum() / (n_ - static_cast<double>(maxima_.k()))
          : std::numeric_limits<double>::quiet_NaN();
}

double FrontierEstimate::operator()(double x) const
{
  switch (cfg_.correction) {
    case Correction::raw:
      return raw(x);
    case Correction::bias_corrected:
      return bias_corrected(x);
    case Correction::edge_corrected:
      return edge_corrected(x);
  }
  return raw(x);
}

FrontierEstimate::Sums FrontierEstimate::direct_sums(double x) const
{
  const auto s =
    kfrontier::direct_sums(maxima_, cfg_.kernel, cfg_.bandwidth, x);
  return { s.weighted, s.weights };
}

FrontierEstimate::Sums FrontierEstimate::reflected_sums(double x) const
{
  auto s = kfrontier::direct_sums(maxima_, cfg_.kernel, cfg_.bandwidth, x);
  add_reflections(maxima_, cfg_.kernel, cfg_.bandwidth, x, s);
  return { s.weighted, s.weights };
}

double FrontierEstimate::raw(double x) const
{
  return direct_sums(x).weighted / static_cast<double>(maxima_.k());
}

double FrontierEstimate::bias_corrected(double x) const
{
  if (std::isnan(zn_)) {
    checked_zn(maxima_, n_);
  }
  const auto s = direct_sums(x);
  return (s.weighted + zn_ * s.weights) / static_cast<double>(maxima_.k());
}

double FrontierEstimate::edge_corrected(double x) const
{
  if (std::isnan(zn_)) {
    checked_zn(maxima_, n_);
  }
  if (!cfg_.kernel.compact()) {
    throw UnsupportedKernel("edge correction requires a compactly supported "
                            "kernel");
  }
  const auto s = reflected_sums(x);
  return (s.weighted + zn_ * s.weights) / static_cast<double>(maxima_.k());
}

EstimateResult evaluate_on_grid(const FrontierEstimate& estimate,
                                const FrontierSpec& spec,
                                std::size_t grid)
{
  if (grid < 2) {
    throw ConfigError("evaluation grid must have at least 2 points");
  }
  EstimateResult out;
  out.config = estimate.config();
  out.intensity = estimate.intensity();
  out.zn = estimate.zn();
  out.frontier_id = spec.id();
  out.x.resize(grid);
  out.estimate.resize(grid);
  out.truth.resize(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid - 1);
    out.x[i] = x;
    out.estimate[i] = estimate(x);
    out.truth[i] = spec(x);
  }
  return out;
}

EstimateResult evaluate_on_grid(const PointSet& points,
                                const FrontierSpec& spec,
                                const EstimatorConfig& cfg,
                                std::size_t grid)
{
  validate(cfg, points.intensity);
  FrontierEstimate estimate(cell_maxima(points.points, cfg.cells), cfg,
                            points.intensity);
  return evaluate_on_grid(estimate, spec, grid);
}

void write_estimate_csv(const EstimateResult& result, std::ostream& out)
{
  out << "x,estimate,truth\n";
  char line[96];
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", result.x[i],
                  result.estimate[i], result.truth[i]);
    out << line;
  }
}

} // namespace kfrontier
