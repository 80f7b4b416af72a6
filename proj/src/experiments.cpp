#include "kfrontier/experiments.hpp"

#include "kfrontier/error.hpp"
#include "kfrontier/rng.hpp"
#include "kfrontier/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace kfrontier {

namespace {

std::string fmt(double v)
{
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Raw and configured-estimator values at each evaluation point, for one
// replicate.
struct ReplicateResult
{
  double l1 = 0.0;
  double zn = 0.0;
  std::vector<double> raw;
  std::vector<double> estimate;
};

std::vector<std::string> plan_problems(const ExperimentPlan& plan)
{
  std::vector<std::string> out;
  std::optional<FrontierSpec> spec;
  try {
    spec.emplace(make_frontier(plan.frontier));
  } catch (const std::exception& e) {
    out.push_back(std::string("frontier: ") + e.what());
  }
  const KernelSpec* kernel = nullptr;
  try {
    kernel = &kernel_by_name(plan.kernel);
  } catch (const std::exception& e) {
    out.push_back(std::string("kernel: ") + e.what());
  }
  if (!(plan.alpha > 0.0 && plan.alpha <= 1.0)) {
    out.push_back("alpha must lie in (0, 1]");
  }
  if (plan.n_ladder.empty()) {
    out.push_back("n_ladder must not be empty");
  }
  for (std::size_t i = 0; i < plan.n_ladder.size(); ++i) {
    const double n = plan.n_ladder[i];
    if (!(n >= 2.0) || !std::isfinite(n)) {
      out.push_back("n_ladder[" + std::to_string(i) + "] must be >= 2");
    }
    if (i > 0 && !(n > plan.n_ladder[i - 1])) {
      out.push_back("n_ladder must be strictly increasing");
    }
  }
  if (!plan.selector) {
    if (plan.explicit_params.size() != plan.n_ladder.size()) {
      out.push_back("explicit (k, h) ladder must have one entry per n");
    }
    for (std::size_t i = 0; i < plan.explicit_params.size(); ++i) {
      const auto& p = plan.explicit_params[i];
      if (p.k == 0) {
        out.push_back("k[" + std::to_string(i) + "] must be >= 1");
      }
      if (!(p.h > 0.0) || !std::isfinite(p.h)) {
        out.push_back("h[" + std::to_string(i) + "] must be positive");
      }
    }
  } else if (!plan.explicit_params.empty()) {
    out.push_back("selector and explicit (k, h) ladder are mutually exclusive");
  }
  if (plan.replicates < 2) {
    out.push_back("replicates must be >= 2");
  }
  if (plan.grid < 2) {
    out.push_back("grid must be >= 2");
  }
  for (double x : plan.eval_points) {
    if (!(x >= 0.0 && x <= 1.0)) {
      out.push_back("evaluation point " + fmt(x) + " outside [0, 1]");
    }
  }
  for (double level : plan.levels) {
    if (!(level > 0.0 && level < 1.0)) {
      out.push_back("coverage level " + fmt(level) + " outside (0, 1)");
    }
  }
  const bool pointwise = plan.wants(Statistic::pointwise) ||
                         plan.wants(Statistic::normality) ||
                         plan.wants(Statistic::vector_normality) ||
                         plan.wants(Statistic::coverage);
  if (pointwise && plan.eval_points.empty()) {
    out.push_back("pointwise statistics need at least one evaluation point");
  }
  if (plan.wants(Statistic::normality) && plan.replicates < 100) {
    out.push_back("normality needs replicates >= 100");
  }
  if (plan.wants(Statistic::coverage)) {
    if (plan.correction == Correction::raw) {
      out.push_back("coverage needs a corrected estimator");
    }
    if (plan.levels.empty()) {
      out.push_back("coverage needs at least one level");
    }
    for (double x : plan.eval_points) {
      if (!(x > 0.0 && x < 1.0)) {
        out.push_back("coverage point " + fmt(x) + " is not interior");
      }
    }
  }
  if (!out.empty() || kernel == nullptr) {
    return out;
  }

  std::vector<LadderStep> steps;
  try {
    steps = resolve_ladder(plan);
  } catch (const std::exception& e) {
    out.push_back(e.what());
    return out;
  }
  for (const auto& s : steps) {
    if (!(s.n > static_cast<double>(s.k))) {
      out.push_back("n = " + fmt(s.n) + " must exceed k = " +
                    std::to_string(s.k));
    }
    try {
      validate(EstimatorConfig{ *kernel, s.h, s.k, plan.correction }, s.n);
    } catch (const std::exception& e) {
      out.push_back(e.what());
    }
  }
  if (plan.wants(Statistic::vector_normality)) {
    if (!kernel->compact()) {
      out.push_back("vector_normality needs a compactly supported kernel");
    } else {
      const double a = kernel->support_radius();
      for (const auto& s : steps) {
        for (std::size_t i = 0; i < plan.eval_points.size(); ++i) {
          for (std::size_t j = i + 1; j < plan.eval_points.size(); ++j) {
            const double d =
              std::abs(plan.eval_points[i] - plan.eval_points[j]);
            if (!(d > 2.0 * a * s.h)) {
              out.push_back("points " + fmt(plan.eval_points[i]) + " and " +
                            fmt(plan.eval_points[j]) +
                            " have overlapping kernel supports at h = " +
                            fmt(s.h));
            }
          }
        }
      }
    }
  }
  return out;
}

ReplicateResult run_one(const FrontierSpec& spec,
                        const EstimatorConfig& cfg,
                        const ExperimentPlan& plan,
                        const LadderStep& step,
                        std::uint64_t seed)
{
  FrontierEstimate est(sample_cell_maxima(spec, step.n, step.k, seed), cfg,
                       step.n);
  ReplicateResult r;
  r.zn = est.zn();
  if (plan.wants(Statistic::l1)) {
    r.l1 = l1_error(evaluate_on_grid(est, spec, plan.grid));
  }
  r.raw.reserve(plan.eval_points.size());
  r.estimate.reserve(plan.eval_points.size());
  for (double x : plan.eval_points) {
    r.raw.push_back(est.raw(x));
    r.estimate.push_back(est(x));
  }
  return r;
}

// Replicates are claimed from a shared counter and written to their own
// slot; all reductions afterwards run in replicate order.
std::vector<ReplicateResult> run_step(const FrontierSpec& spec,
                                      const EstimatorConfig& cfg,
                                      const ExperimentPlan& plan,
                                      const LadderStep& step,
                                      std::size_t step_index)
{
  const std::size_t count = plan.replicates;
  std::vector<ReplicateResult> results(count);
  std::vector<std::string> failures(count);
  std::atomic<std::size_t> next{ 0 };
  const auto worker = [&] {
    for (std::size_t j = next++; j < count; j = next++) {
      try {
        results[j] = run_one(spec, cfg, plan, step,
                             derive_seed(plan.seed, { step_index, j }));
      } catch (const std::exception& e) {
        failures[j] = e.what();
      }
    }
  };
  std::size_t workers = plan.workers;
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }
  std::string message;
  std::size_t failed = 0;
  for (std::size_t j = 0; j < count; ++j) {
    if (!failures[j].empty()) {
      if (failed++ < 10) {
        message += "\n  n = " + fmt(step.n) + ", replicate " +
                   std::to_string(j) + ": " + failures[j];
      }
    }
  }
  if (failed > 0) {
    throw NumericalError(std::to_string(failed) + " replicate(s) failed:" +
                         message);
  }
  return results;
}

StepReport reduce_step(const FrontierSpec& spec,
                       const KernelSpec& kernel,
                       const ExperimentPlan& plan,
                       const LadderStep& step,
                       const std::vector<ReplicateResult>& results)
{
  StepReport rep;
  rep.step = step;
  rep.params = normalization(step.n, step.k, step.h, kernel, spec.normalizer());
  rep.regime = regime_report(step.n, step.k, step.h, plan.alpha, kernel);

  const std::size_t count = results.size();
  std::vector<double> zn(count);
  for (std::size_t j = 0; j < count; ++j) {
    zn[j] = results[j].zn;
  }
  if (plan.correction != Correction::raw) {
    rep.zn_mean = mean(zn);
    rep.zn_stderr = standard_error(zn);
  } else {
    rep.zn_mean = std::nan("");
    rep.zn_stderr = std::nan("");
  }
  if (plan.wants(Statistic::l1)) {
    rep.l1_errors.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
      rep.l1_errors[j] = results[j].l1;
    }
    rep.l1_mean = mean(rep.l1_errors);
    rep.l1_stderr = standard_error(rep.l1_errors);
  }

  const std::size_t q = plan.eval_points.size();
  const double sigma_n = rep.params.sigma_n;
  std::vector<std::vector<double>> raw(q, std::vector<double>(count));
  std::vector<std::vector<double>> est(q, std::vector<double>(count));
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t i = 0; i < q; ++i) {
      raw[i][j] = results[j].raw[i];
      est[i][j] = results[j].estimate[i];
    }
  }
  std::vector<double> raw_mean(q);
  for (std::size_t i = 0; i < q; ++i) {
    raw_mean[i] = mean(raw[i]);
  }

  if (plan.wants(Statistic::pointwise)) {
    for (std::size_t i = 0; i < q; ++i) {
      const double x = plan.eval_points[i];
      rep.pointwise.push_back(
        { x, spec(x), mean(est[i]), standard_error(est[i]), raw_mean[i] });
    }
  }
  if (plan.wants(Statistic::normality)) {
    for (std::size_t i = 0; i < q; ++i) {
      const double x = plan.eval_points[i];
      const double truth = spec(x);
      std::vector<double> s(count);
      std::vector<double> t(count);
      for (std::size_t j = 0; j < count; ++j) {
        s[j] = (raw[i][j] - raw_mean[i]) / sigma_n;
        t[j] = (est[i][j] - truth) / sigma_n;
      }
      rep.normality.push_back(
        { x, normality_stats(s, rep.params.sigma, plan.tolerances.ks_alpha),
          normality_stats(t, rep.params.sigma, plan.tolerances.ks_alpha) });
    }
  }
  if (plan.wants(Statistic::vector_normality)) {
    rep.correlation.assign(q, std::vector<double>(q, 1.0));
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t b = a + 1; b < q; ++b) {
        const double rho = correlation(raw[a], raw[b]);
        rep.correlation[a][b] = rho;
        rep.correlation[b][a] = rho;
      }
    }
  }
  if (plan.wants(Statistic::coverage)) {
    for (double level : plan.levels) {
      for (std::size_t i = 0; i < q; ++i) {
        const double truth = spec(plan.eval_points[i]);
        std::size_t hits = 0;
        for (std::size_t j = 0; j < count; ++j) {
          const auto ci = confidence_interval(est[i][j], rep.params, level);
          if (ci.lo <= truth && truth <= ci.hi) {
            ++hits;
          }
        }
        rep.coverage.push_back(
          { plan.eval_points[i], level,
            static_cast<double>(hits) / static_cast<double>(count) });
      }
    }
  }
  return rep;
}

nlohmann::ordered_json stats_json(const NormalityStats& s)
{
  return { { "count", s.count },       { "mean", s.mean },
           { "variance", s.variance }, { "skewness", s.skewness },
           { "ks", s.ks },             { "ks_critical", s.ks_critical } };
}

nlohmann::ordered_json proxies_json(const std::vector<RegimeProxy>& proxies)
{
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : proxies) {
    arr.push_back({ { "name", p.name },
                    { "value", p.value },
                    { "expect", p.should_diverge ? "large" : "small" },
                    { "checked", p.checked } });
  }
  return arr;
}

} // namespace

std::string_view to_string(Statistic s)
{
  switch (s) {
    case Statistic::l1:
      return "l1";
    case Statistic::pointwise:
      return "pointwise";
    case Statistic::coverage:
      return "coverage";
    case Statistic::normality:
      return "normality";
    case Statistic::vector_normality:
      return "vector_normality";
  }
  return "l1";
}

Statistic statistic_from_string(std::string_view name)
{
  for (auto s : { Statistic::l1, Statistic::pointwise, Statistic::coverage,
                  Statistic::normality, Statistic::vector_normality }) {
    if (to_string(s) == name) {
      return s;
    }
  }
  throw ConfigError("unknown statistic '" + std::string(name) +
                    "' (expected l1, pointwise, coverage, normality or "
                    "vector_normality)");
}

bool ExperimentPlan::wants(Statistic s) const
{
  return std::find(statistics.begin(), statistics.end(), s) !=
         statistics.end();
}

void validate(const ExperimentPlan& plan)
{
  const auto problems = plan_problems(plan);
  if (problems.empty()) {
    return;
  }
  std::string msg = "invalid experiment plan:";
  for (const auto& p : problems) {
    msg += "\n  - " + p;
  }
  throw ConfigError(msg);
}

std::vector<LadderStep> resolve_ladder(const ExperimentPlan& plan)
{
  std::vector<LadderStep> steps;
  steps.reserve(plan.n_ladder.size());
  for (std::size_t i = 0; i < plan.n_ladder.size(); ++i) {
    const double n = plan.n_ladder[i];
    if (plan.selector) {
      const auto hp = select_hyperparams(n, plan.alpha, *plan.selector);
      steps.push_back({ n, hp.k, hp.h });
    } else {
      if (i >= plan.explicit_params.size()) {
        throw ConfigError("explicit (k, h) ladder is shorter than n_ladder");
      }
      steps.push_back({ n, plan.explicit_params[i].k,
                        plan.explicit_params[i].h });
    }
  }
  return steps;
}

double l1_error(const EstimateResult& result)
{
  const std::size_t g = result.x.size();
  if (g < 2 || result.estimate.size() != g || result.truth.size() != g) {
    throw ConfigError("l1_error: need at least 2 consistent grid points");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < g; ++i) {
    const double a = std::abs(result.estimate[i - 1] - result.truth[i - 1]);
    const double b = std::abs(result.estimate[i] - result.truth[i]);
    total += 0.5 * (result.x[i] - result.x[i - 1]) * (a + b);
  }
  return total;
}

RateFit rate_fit(std::span<const double> n_ladder,
                 std::span<const double> mean_errors)
{
  if (n_ladder.size() != mean_errors.size()) {
    throw ConfigError("rate_fit: ladder and errors differ in length");
  }
  const std::size_t m = n_ladder.size();
  if (m < 3) {
    throw ConfigError("rate_fit: need at least 3 ladder points, got " +
                      std::to_string(m));
  }
  std::vector<double> lx(m);
  std::vector<double> ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(n_ladder[i] > 0.0)) {
      throw ConfigError("rate_fit: intensities must be positive");
    }
    if (!(mean_errors[i] > 0.0) || !std::isfinite(mean_errors[i])) {
      throw ConfigError("rate_fit: errors must be positive, got " +
                        fmt(mean_errors[i]) + " at n = " + fmt(n_ladder[i]));
    }
    lx[i] = std::log(n_ladder[i]);
    ly[i] = std::log(mean_errors[i]);
  }
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw ConfigError("rate_fit: intensities must not all be equal");
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ssr += r * r;
  }
  const double se = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  return { slope, se, intercept };
}

NormalityStats normality_stats(std::span<const double> samples,
                               double sigma,
                               double ks_alpha)
{
  if (samples.size() < 100) {
    throw ConfigError("normality_stats: need at least 100 samples, got " +
                      std::to_string(samples.size()));
  }
  if (!(sigma > 0.0)) {
    throw ConfigError("normality_stats: sigma must be positive");
  }
  const auto m = sample_moments(samples);
  if (!(m.variance > 0.0)) {
    throw DegenerateSample("normality_stats: sample has zero variance");
  }
  const double ks = ks_statistic(
    samples, [sigma](double v) { return normal_cdf(v / sigma); });
  return { samples.size(), m.mean, m.variance, m.skewness, ks,
           ks_critical_value(ks_alpha, samples.size()) };
}

std::optional<bool> ExperimentReport::rate_pass() const
{
  if (!rate || !target_slope) {
    return std::nullopt;
  }
  return std::abs(rate->slope - *target_slope) <= plan.tolerances.slope;
}

ExperimentReport run_replicates(const ExperimentPlan& plan)
{
  validate(plan);
  const FrontierSpec spec = make_frontier(plan.frontier);
  const KernelSpec& kernel = kernel_by_name(plan.kernel);
  ExperimentReport report;
  report.plan = plan;
  const auto steps = resolve_ladder(plan);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const EstimatorConfig cfg{ kernel, steps[i].h, steps[i].k,
                               plan.correction };
    const auto results = run_step(spec, cfg, plan, steps[i], i);
    report.steps.push_back(reduce_step(spec, kernel, plan, steps[i], results));
  }
  if (plan.wants(Statistic::l1) && steps.size() >= 3) {
    std::vector<double> ns;
    std::vector<double> errs;
    for (const auto& s : report.steps) {
      ns.push_back(s.step.n);
      errs.push_back(s.l1_mean);
    }
    report.rate = rate_fit(ns, errs);
    if (plan.selector) {
      report.target_slope = target_l1_slope(plan.alpha, *plan.selector);
    }
  }
  return report;
}

std::vector<std::vector<double>> vector_normality(const ExperimentPlan& plan,
                                                  std::span<const double> points)
{
  if (points.empty()) {
    throw ConfigError("vector_normality: need at least one point");
  }
  ExperimentPlan p = plan;
  if (p.n_ladder.size() > 1) {
    p.n_ladder = { plan.n_ladder.back() };
    if (!p.selector) {
      p.explicit_params = { plan.explicit_params.back() };
    }
  }
  p.eval_points.assign(points.begin(), points.end());
  p.statistics = { Statistic::vector_normality };
  return run_replicates(p).steps.back().correlation;
}

double coverage_test(const ExperimentPlan& plan, double point, double level)
{
  ExperimentPlan p = plan;
  if (p.n_ladder.size() > 1) {
    p.n_ladder = { plan.n_ladder.back() };
    if (!p.selector) {
      p.explicit_params = { plan.explicit_params.back() };
    }
  }
  p.eval_points = { point };
  p.levels = { level };
  p.statistics = { Statistic::coverage };
  return run_replicates(p).steps.back().coverage.front().frequency;
}

std::string report_json(const ExperimentReport& report)
{
  using nlohmann::ordered_json;
  const auto& plan = report.plan;
  ordered_json j;
  j["schema"] = "kfrontier.report/1";

  ordered_json cfg;
  cfg["frontier"] = plan.frontier;
  cfg["kernel"] = plan.kernel;
  cfg["alpha"] = plan.alpha;
  if (plan.selector) {
    cfg["selector"] = std::string(to_string(*plan.selector));
  } else {
    auto kh = ordered_json::array();
    for (const auto& p : plan.explicit_params) {
      kh.push_back({ { "k", p.k }, { "h", p.h } });
    }
    cfg["explicit_params"] = kh;
  }
  cfg["correction"] = std::string(to_string(plan.correction));
  cfg["n_ladder"] = plan.n_ladder;
  cfg["replicates"] = plan.replicates;
  cfg["grid"] = plan.grid;
  cfg["seed"] = plan.seed;
  cfg["eval_points"] = plan.eval_points;
  cfg["levels"] = plan.levels;
  auto stats = ordered_json::array();
  for (auto s : plan.statistics) {
    stats.push_back(std::string(to_string(s)));
  }
  cfg["statistics"] = stats;
  j["config"] = cfg;
  j["tolerances"] = { { "slope", plan.tolerances.slope },
                      { "variance_band", plan.tolerances.variance_band },
                      { "ks_slack", plan.tolerances.ks_slack },
                      { "ks_alpha", plan.tolerances.ks_alpha } };

  auto steps = ordered_json::array();
  for (const auto& s : report.steps) {
    ordered_json st;
    st["n"] = s.step.n;
    st["k"] = s.step.k;
    st["h"] = s.step.h;
    st["params"] = { { "sigma_n", s.params.sigma_n },
                     { "sigma", s.params.sigma } };
    st["regime"] = {
      { "situation", std::string(to_string(s.regime.situation)) },
      { "proxies", proxies_json(s.regime.proxies) },
      { "corrected_limit_proxies",
        proxies_json(s.regime.corrected_limit_proxies) },
      { "warnings", s.regime.warnings }
    };
    if (plan.correction != Correction::raw) {
      st["zn"] = { { "mean", s.zn_mean }, { "stderr", s.zn_stderr } };
    }
    if (plan.wants(Statistic::l1)) {
      st["l1"] = { { "mean", s.l1_mean },
                   { "stderr", s.l1_stderr },
                   { "errors", s.l1_errors } };
    }
    if (!s.pointwise.empty()) {
      auto arr = ordered_json::array();
      for (const auto& p : s.pointwise) {
        arr.push_back({ { "x", p.x },
                        { "truth", p.truth },
                        { "mean_estimate", p.mean_estimate },
                        { "stderr_estimate", p.stderr_estimate },
                        { "mean_raw", p.mean_raw } });
      }
      st["pointwise"] = arr;
    }
    if (!s.normality.empty()) {
      auto arr = ordered_json::array();
      for (const auto& p : s.normality) {
        arr.push_back({ { "x", p.x },
                        { "s_n", stats_json(p.s_n) },
                        { "t_n", stats_json(p.t_n) } });
      }
      st["normality"] = arr;
    }
    if (!s.correlation.empty()) {
      st["correlation"] = s.correlation;
    }
    if (!s.coverage.empty()) {
      auto arr = ordered_json::array();
      for (const auto& c : s.coverage) {
        arr.push_back(
          { { "x", c.x }, { "level", c.level }, { "frequency", c.frequency } });
      }
      st["coverage"] = arr;
    }
    steps.push_back(st);
  }
  j["steps"] = steps;

  if (report.rate) {
    ordered_json r;
    r["slope"] = report.rate->slope;
    r["stderr"] = report.rate->stderr_slope;
    r["intercept"] = report.rate->intercept;
    if (report.target_slope) {
      r["target"] = *report.target_slope;
      r["tolerance"] = plan.tolerances.slope;
      r["pass"] = *report.rate_pass();
    }
    j["rate_fit"] = r;
  }
  return j.dump(2) + "\n";
}

void write_replicates_csv(const ExperimentReport& report, std::ostream& out)
{
  out << "n,replicate,l1_error\n";
  for (const auto& s : report.steps) {
    for (std::size_t j = 0; j < s.l1_errors.size(); ++j) {
      out << fmt(s.step.n) << ',' << j << ',' << fmt(s.l1_errors[j]) << '\n';
    }
  }
}

void write_rates_csv(const ExperimentReport& report, std::ostream& out)
{
  out << "n,mean_error,stderr\n";
  for (const auto& s : report.steps) {
    out << fmt(s.step.n) << ',' << fmt(s.l1_mean) << ','
        << fmt(s.l1_stderr) << '\n';
  }
}

} // namespace kfrontier
