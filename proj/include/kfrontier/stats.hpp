#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kfrontier {

//! Standard normal CDF.
double normal_cdf(double z);

//! Standard normal quantile by Wichura's AS 241 (PPND16) rational
//! approximation; about 1e-16 relative accuracy on (0, 1).
double normal_quantile(double p);

//! One-sample Kolmogorov-Smirnov distance sup |F_emp - F| for a continuous
//! reference CDF. `samples` need not be sorted.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

//! Asymptotic two-sided critical value sqrt(-log(a/2)/2)/sqrt(N), e.g.
//! about 1.63/sqrt(N) at a = 0.01.
double ks_critical_value(double alpha, std::size_t sample_size);

struct SampleMoments
{
  double mean;
  double variance; //!< unbiased (N - 1 denominator)
  double skewness; //!< standardized third central moment
};

SampleMoments sample_moments(std::span<const double> samples);

double mean(std::span<const double> values);
//! Standard error of the mean.
double standard_error(std::span<const double> values);

//! Pearson correlation of two equally long series.
double correlation(std::span<const double> a, std::span<const double> b);

} // namespace kfrontier
