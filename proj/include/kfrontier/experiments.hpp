#pragma once

#include "kfrontier/asymptotics.hpp"
#include "kfrontier/estimator.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kfrontier {

enum class Statistic
{
  l1,
  pointwise,
  coverage,
  normality,
  vector_normality
};

std::string_view to_string(Statistic s);
Statistic statistic_from_string(std::string_view name);

//! Declared error budget of the Monte Carlo checks, echoed in every report.
struct Tolerances
{
  double slope = 0.15;         //!< |fitted - target| L1 rate exponent
  double variance_band = 0.15; //!< relative band on Var s_n / sigma^2
  double ks_slack = 1.5;       //!< multiplier on the 1% KS critical value
  double ks_alpha = 0.01;
};

struct ExplicitParams
{
  std::size_t k;
  double h;
};

struct ExperimentPlan
{
  std::string frontier = "flat:1";
  std::string kernel = "biweight";
  double alpha = 1.0;
  //! Hyperparameter selector; when empty, `explicit_params` gives (k, h)
  //! for each entry of the ladder.
  std::optional<SelectorMode> selector = SelectorMode::mse_corrected;
  std::vector<ExplicitParams> explicit_params;
  Correction correction = Correction::bias_corrected;
  std::vector<double> n_ladder;
  std::size_t replicates = 100;
  std::size_t grid = 512;
  std::uint64_t seed = 0;
  //! Abscissae for pointwise, normality, vector and coverage statistics.
  std::vector<double> eval_points{ 0.5 };
  std::vector<double> levels{ 0.95 };
  std::vector<Statistic> statistics{ Statistic::l1 };
  //! Replicate threads; 0 picks the hardware concurrency. Results do not
  //! depend on it.
  std::size_t workers = 1;
  Tolerances tolerances{};

  bool wants(Statistic s) const;
};

//! Throws ConfigError listing every violated requirement.
void validate(const ExperimentPlan& plan);

struct LadderStep
{
  double n;
  std::size_t k;
  double h;
};

std::vector<LadderStep> resolve_ladder(const ExperimentPlan& plan);

//! Composite trapezoid of |estimate - truth| over the result grid.
double l1_error(const EstimateResult& result);

struct RateFit
{
  double slope;
  double stderr_slope;
  double intercept;
};

//! Least squares of log(error) on log(n). Needs >= 3 points and positive
//! errors.
RateFit rate_fit(std::span<const double> n_ladder,
                 std::span<const double> mean_errors);

struct NormalityStats
{
  std::size_t count;
  double mean;
  double variance;
  double skewness;
  double ks;          //!< KS distance to N(0, sigma^2)
  double ks_critical; //!< asymptotic critical value at the requested level
};

//! Moments and KS distance of standardized samples against N(0, sigma^2).
//! Needs >= 100 samples; a constant sample throws DegenerateSample.
NormalityStats normality_stats(std::span<const double> samples,
                               double sigma,
                               double ks_alpha = 0.01);

struct PointStats
{
  double x;
  double truth;
  double mean_estimate;
  double stderr_estimate;
  double mean_raw; //!< Monte Carlo surrogate of E fhat(x)
};

struct PointNormality
{
  double x;
  NormalityStats s_n; //!< (fhat - mean fhat) / sigma_n
  NormalityStats t_n; //!< (estimate - f) / sigma_n
};

struct CoverageEntry
{
  double x;
  double level;
  double frequency;
};

struct StepReport
{
  LadderStep step;
  AsymptoticParams params;
  RegimeReport regime;
  std::vector<double> l1_errors; //!< one per replicate, in replicate order
  double l1_mean = 0.0;
  double l1_stderr = 0.0;
  double zn_mean = 0.0;
  double zn_stderr = 0.0;
  std::vector<PointStats> pointwise;
  std::vector<PointNormality> normality;
  std::vector<std::vector<double>> correlation;
  std::vector<CoverageEntry> coverage;
};

struct ExperimentReport
{
  ExperimentPlan plan;
  std::vector<StepReport> steps;
  std::optional<RateFit> rate;
  std::optional<double> target_slope;

  //! True when the fitted slope lies within tolerance of the target.
  std::optional<bool> rate_pass() const;
};

ExperimentReport run_replicates(const ExperimentPlan& plan);

//! Empirical correlation matrix of (s_n(y_1), ..., s_n(y_q)) at the last
//! ladder entry. The points must be pairwise further apart than 2 A h.
std::vector<std::vector<double>> vector_normality(const ExperimentPlan& plan,
                                                  std::span<const double> points);

//! Fraction of replicates at the last ladder entry whose interval around
//! the corrected estimate at `point` contains f(point).
double coverage_test(const ExperimentPlan& plan, double point, double level);

//! Structured report with schema "kfrontier.report/1".
std::string report_json(const ExperimentReport& report);
//! `n,replicate,l1_error`
void write_replicates_csv(const ExperimentReport& report, std::ostream& out);
//! `n,mean_error,stderr`
void write_rates_csv(const ExperimentReport& report, std::ostream& out);

} // namespace kfrontier
