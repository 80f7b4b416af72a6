#pragma once

#include "kfrontier/frontier.hpp"
#include "kfrontier/kernel.hpp"
#include "kfrontier/simulate.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kfrontier {

//! Cell index (0-based) of abscissa x for the partition of [0, 1] into k
//! half-open intervals [r/k, (r+1)/k), the last one closed at 1. The
//! comparison against r/k is exact (no rounding of x * k).
std::size_t cell_index(double x, std::size_t k);

//! The k vertical strips D_r of S over I_r, with per-cell integrals and
//! extremes of f.
struct CellPartition
{
  std::size_t k = 0;
  std::vector<double> centers;  //!< x_r = (r - 1/2) / k
  std::vector<double> measures; //!< lambda_r = int_{I_r} f
  std::vector<double> mins;     //!< m_r = min_{I_r} f
  std::vector<double> maxs;     //!< M_r = max_{I_r} f
  double normalizer = 0.0;      //!< c of the frontier

  double lower_edge(std::size_t r) const
  {
    return static_cast<double>(r) / static_cast<double>(k);
  }
  double upper_edge(std::size_t r) const
  {
    return static_cast<double>(r + 1) / static_cast<double>(k);
  }
};

CellPartition make_partition(const FrontierSpec& spec, std::size_t k);

//! Per-cell maxima of the ordinates; 0 for empty cells.
struct CellMaxima
{
  std::vector<double> values;
  std::vector<std::size_t> empty_cells;

  std::size_t k() const { return values.size(); }
  double sum() const;
};

CellMaxima cell_maxima(std::span<const Point> points, std::size_t k);
CellMaxima cell_maxima(const PointSet& points, const CellPartition& partition);

//! Samples a Poisson realization and reduces it to cell maxima without
//! storing the points. Equals cell_maxima(sample_poisson(spec, n, seed), k).
CellMaxima sample_cell_maxima(const FrontierSpec& spec,
                              double n,
                              std::size_t k,
                              std::uint64_t seed);

enum class Correction
{
  raw,            //!< kernel estimator of the cell maxima
  bias_corrected, //!< maxima shifted by Z_n
  edge_corrected  //!< bias correction plus reflection at 0 and 1
};

std::string_view to_string(Correction c);
Correction correction_from_string(std::string_view name);

struct EstimatorConfig
{
  KernelSpec kernel = kernels::biweight();
  double bandwidth = 0.1;
  std::size_t cells = 10;
  Correction correction = Correction::raw;
};

//! Throws InvalidBandwidth / ConfigError for an unusable configuration,
//! including k >= n when a correction is requested and a reflected
//! estimator on a kernel without compact support.
void validate(const EstimatorConfig& cfg, double n);

//! (1/k) sum_r K_h(x - x_r) X*_r.
double estimate_fhat(const CellMaxima& maxima,
                     const EstimatorConfig& cfg,
                     double x);

//! X* of the cell containing x.
double estimate_geffroy(const CellMaxima& maxima, double x);
double estimate_geffroy(const CellMaxima& maxima,
                        const CellPartition& partition,
                        double x);

//! Z_n = sum_r X*_r / (n - k). Requires n > k.
double bias_correction_zn(const CellMaxima& maxima, double n);

//! (1/k) sum_r K_h(x - x_r) (X*_r + Z_n).
double estimate_ftilde(const CellMaxima& maxima,
                       const EstimatorConfig& cfg,
                       double n,
                       double x);

//! (1/k) sum_r [K_h(x - x_r) + K_h(x + x_r) + K_h(x + x_r - 2)]
//! (X*_r + Z_n). Requires a compactly supported kernel.
double estimate_fcheck(const CellMaxima& maxima,
                       const EstimatorConfig& cfg,
                       double n,
                       double x);

//! A fitted estimator for one realization: Z_n is computed once and reused
//! across evaluation points.
class FrontierEstimate
{
public:
  FrontierEstimate(CellMaxima maxima, EstimatorConfig cfg, double n);

  //! Estimate at x using the configured correction.
  double operator()(double x) const;

  double raw(double x) const;
  double bias_corrected(double x) const;
  double edge_corrected(double x) const;

  double zn() const { return zn_; }
  const CellMaxima& maxima() const { return maxima_; }
  const EstimatorConfig& config() const { return cfg_; }
  double intensity() const { return n_; }

private:
  struct Sums
  {
    double weighted; //!< sum K_h X*
    double weights;  //!< sum K_h
  };
  Sums direct_sums(double x) const;
  Sums reflected_sums(double x) const;

  CellMaxima maxima_;
  EstimatorConfig cfg_;
  double n_;
  double zn_ = 0.0;
};

struct EstimateResult
{
  std::vector<double> x;
  std::vector<double> estimate;
  std::vector<double> truth;
  EstimatorConfig config;
  double intensity = 0.0;
  double zn = 0.0;
  std::string frontier_id;
};

//! Estimates on `grid` equispaced points including both endpoints; the
//! variant follows cfg.correction.
EstimateResult evaluate_on_grid(const PointSet& points,
                                const FrontierSpec& spec,
                                const EstimatorConfig& cfg,
                                std::size_t grid);
EstimateResult evaluate_on_grid(const FrontierEstimate& estimate,
                                const FrontierSpec& spec,
                                std::size_t grid);

//! CSV with header `x,estimate,truth`.
void write_estimate_csv(const EstimateResult& result, std::ostream& out);

} // namespace kfrontier
