#include "kfrontier/stats.hpp"

#include "kfrontier/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace kfrontier {

double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) {
      return -std::numeric_limits<double>::infinity();
    }
    if (p == 1.0) {
      return std::numeric_limits<double>::infinity();
    }
    throw ConfigError("normal_quantile: probability must lie in [0, 1]");
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.4952788528545610 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf)
{
  if (samples.empty()) {
    throw ConfigError("ks_statistic: empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f,
                             f - static_cast<double>(i) / n));
  }
  return d;
}

double ks_critical_value(double alpha, std::size_t sample_size)
{
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(sample_size));
}

double mean(std::span<const double> values)
{
  if (values.empty()) {
    throw ConfigError("mean of an empty sample");
  }
  double s = 0.0;
  for (double v : values) {
    s += v;
  }
  return s / static_cast<double>(values.size());
}

SampleMoments sample_moments(std::span<const double> samples)
{
  if (samples.size() < 2) {
    throw ConfigError("sample_moments: need at least 2 samples");
  }
  const double m = mean(samples);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : samples) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(samples.size());
  const double biased = m2 / n;
  const double skew = biased > 0.0 ? (m3 / n) / std::pow(biased, 1.5) : 0.0;
  return { m, m2 / (n - 1.0), skew };
}

double standard_error(std::span<const double> values)
{
  if (values.size() < 2) {
    return 0.0;
  }
  return std::sqrt(sample_moments(values).variance /
                   static_cast<double>(values.size()));
}

double correlation(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size() || a.size() < 2) {
    throw ConfigError("correlation: series must have equal length >= 2");
  }
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw DegenerateSample("correlation of a constant series");
  }
  return sab / std::sqrt(saa * sbb);
}

} // namespace kfrontier
