#include "commands.hpp"

#include "kfrontier/asymptotics.hpp"
#include "kfrontier/error.hpp"
#include "kfrontier/estimator.hpp"
#include "kfrontier/experiments.hpp"
#include "kfrontier/simulate.hpp"
#include "kfrontier/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace kfrontier::cli {

namespace fs = std::filesystem;

namespace {

void require(bool ok, const std::string& field, const std::string& what)
{
  if (!ok) {
    throw ConfigError(field + ": " + what);
  }
}

std::ofstream open_output(const fs::path& dir, const std::string& name)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " +
                             dir.string() + ": " + ec.message());
  }
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

void finish(std::ofstream& out, const fs::path& path)
{
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

void write_file(const fs::path& dir,
                const std::string& name,
                const std::string& content)
{
  auto out = open_output(dir, name);
  out << content;
  finish(out, dir / name);
}

double require_n(const RunConfig& cfg)
{
  require(cfg.n.has_value(), "n", "required");
  require(*cfg.n > 0.0 && std::isfinite(*cfg.n), "n",
          "must be positive");
  return *cfg.n;
}

void check_common(const RunConfig& cfg)
{
  require(cfg.grid >= 2, "grid", "must be >= 2");
  require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "alpha", "must lie in (0, 1]");
  require(!(cfg.selector && (!cfg.k.empty() || !cfg.h.empty())), "selector",
          "exclusive with explicit k/h");
}

EstimatorConfig estimator_config(const RunConfig& cfg, double n)
{
  check_common(cfg);
  EstimatorConfig ec;
  ec.kernel = kernel_by_name(cfg.kernel);
  ec.correction = correction_from_string(cfg.correction);
  if (cfg.selector) {
    require(n >= 2.0, "n", "selector needs n >= 2");
    const auto hp =
      select_hyperparams(n, cfg.alpha, selector_from_string(*cfg.selector));
    ec.cells = hp.k;
    ec.bandwidth = hp.h;
  } else {
    require(cfg.k.size() == 1, "k", "give exactly one value or a selector");
    require(cfg.h.size() == 1, "h", "give exactly one value or a selector");
    ec.cells = cfg.k.front();
    ec.bandwidth = cfg.h.front();
  }
  validate(ec, n);
  return ec;
}

ExperimentPlan make_plan(const RunConfig& cfg)
{
  check_common(cfg);
  require(cfg.seed.has_value(), "seed",
          "required for " + cfg.command + " (no implicit seeding)");
  require(!cfg.n_ladder.empty(), "n_ladder", "required");
  require(cfg.workers <= 1024, "workers", "at most 1024");
  ExperimentPlan plan;
  plan.frontier = cfg.frontier;
  plan.kernel = cfg.kernel;
  plan.alpha = cfg.alpha;
  if (cfg.selector) {
    plan.selector = selector_from_string(*cfg.selector);
  } else {
    require(!cfg.k.empty() && cfg.k.size() == cfg.h.size(), "k",
            "explicit ladders need one k and one h per n, or a selector");
    plan.selector.reset();
    for (std::size_t i = 0; i < cfg.k.size(); ++i) {
      plan.explicit_params.push_back({ cfg.k[i], cfg.h[i] });
    }
  }
  plan.correction = correction_from_string(cfg.correction);
  plan.n_ladder = cfg.n_ladder;
  plan.replicates = cfg.replicates;
  plan.grid = cfg.grid;
  plan.seed = *cfg.seed;
  plan.eval_points = cfg.eval_points;
  plan.levels = cfg.levels;
  plan.statistics.clear();
  for (const auto& s : cfg.statistics) {
    plan.statistics.push_back(statistic_from_string(s));
  }
  plan.workers = cfg.workers;
  validate(plan);
  return plan;
}

void write_experiment_files(const ExperimentReport& report,
                            const fs::path& dir)
{
  write_file(dir, "report.json", report_json(report));
  if (report.plan.wants(Statistic::l1)) {
    std::ostringstream reps;
    write_replicates_csv(report, reps);
    write_file(dir, "replicates.csv", reps.str());
    std::ostringstream rates;
    write_rates_csv(report, rates);
    write_file(dir, "rates.csv", rates.str());
  }
}

std::vector<Point> read_points_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("points: cannot open " + path.string());
  }
  try {
    return read_points_csv(in);
  } catch (const std::exception& e) {
    throw ConfigError("points: " + path.string() + ": " + e.what());
  }
}

} // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& log)
{
  const double n = require_n(cfg);
  const auto spec = make_frontier(cfg.frontier);
  const auto mode = sampling_mode_from_string(cfg.sampling);
  const std::uint64_t seed = cfg.seed.value_or(0);
  PointSet points;
  if (mode == SamplingMode::binomial) {
    require(std::floor(n) == n, "n", "binomial sampling needs an integer n");
    points = sample_binomial(spec, static_cast<std::uint64_t>(n), seed);
  } else {
    points = sample_poisson(spec, n, seed);
  }
  auto out = open_output(cfg.output_dir, "points.csv");
  write_points_csv(points, out);
  finish(out, cfg.output_dir / "points.csv");
  write_file(cfg.output_dir, "points.json", points_metadata_json(points));
  log << "wrote " << points.points.size() << " points to "
      << (cfg.output_dir / "points.csv").string() << '\n';
  return exit_ok;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& log)
{
  const double n = require_n(cfg);
  const auto spec = make_frontier(cfg.frontier);
  const auto ec = estimator_config(cfg, n);
  require(cfg.level > 0.0 && cfg.level < 1.0, "level", "must lie in (0, 1)");

  PointSet points;
  if (cfg.points) {
    points.points = read_points_file(*cfg.points);
    points.intensity = n;
    points.frontier_id = spec.id();
  } else {
    points = sample_poisson(spec, n, cfg.seed.value_or(0));
  }
  const auto result = evaluate_on_grid(points, spec, ec, cfg.grid);
  const auto params =
    normalization(n, ec.cells, ec.bandwidth, ec.kernel, spec.normalizer());
  const double half_width =
    normal_quantile(0.5 * (1.0 + cfg.level)) * params.scale();
  RegimeReport regime{ Situation::none, {}, {}, {} };
  if (n > 1.0) {
    regime =
      regime_report(n, ec.cells, ec.bandwidth, cfg.alpha, ec.kernel);
  } else {
    regime.warnings.push_back("n <= 1: regime diagnostics unavailable");
  }

  auto out = open_output(cfg.output_dir, "estimate.csv");
  write_estimate_csv(result, out);
  finish(out, cfg.output_dir / "estimate.csv");

  nlohmann::ordered_json j;
  j["schema"] = "kfrontier.estimate/1";
  j["frontier"] = spec.id();
  j["kernel"] = ec.kernel.id();
  j["n"] = n;
  j["k"] = ec.cells;
  j["h"] = ec.bandwidth;
  j["correction"] = std::string(to_string(ec.correction));
  j["grid"] = cfg.grid;
  if (cfg.points) {
    j["points_file"] = cfg.points->string();
  } else {
    j["seed"] = cfg.seed.value_or(0);
  }
  j["point_count"] = points.points.size();
  if (std::isfinite(result.zn)) {
    j["zn"] = result.zn;
  }
  j["l1_error"] = l1_error(result);
  j["sigma_n"] = params.sigma_n;
  j["sigma"] = params.sigma;
  j["ci_level"] = cfg.level;
  j["ci_half_width"] = half_width;
  j["situation"] = std::string(to_string(regime.situation));
  j["regime_warnings"] = regime.warnings;
  write_file(cfg.output_dir, "summary.json", j.dump(2) + "\n");

  for (const auto& w : regime.warnings) {
    log << "warning: " << w << '\n';
  }
  log << "L1 error " << l1_error(result) << ", wrote "
      << (cfg.output_dir / "estimate.csv").string() << '\n';
  return exit_ok;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& log)
{
  const auto plan = make_plan(cfg);
  const auto report = run_replicates(plan);
  write_experiment_files(report, cfg.output_dir);
  for (const auto& s : report.steps) {
    for (const auto& w : s.regime.warnings) {
      log << "warning (n = " << s.step.n << "): " << w << '\n';
    }
  }
  log << "wrote " << (cfg.output_dir / "report.json").string() << '\n';
  return exit_ok;
}

int cmd_rates(const RunConfig& cfg, std::ostream& log)
{
  RunConfig c = cfg;
  if (std::find(c.statistics.begin(), c.statistics.end(), "l1") ==
      c.statistics.end()) {
    c.statistics.push_back("l1");
  }
  require(c.n_ladder.size() >= 3, "n_ladder",
          "rate fitting needs at least 3 intensities, got " +
            std::to_string(c.n_ladder.size()));
  const auto plan = make_plan(c);
  const auto report = run_replicates(plan);
  write_experiment_files(report, c.output_dir);

  char line[160];
  std::snprintf(line, sizeof line, "fitted slope %.4f (stderr %.4f)",
                report.rate->slope, report.rate->stderr_slope);
  log << line;
  if (!report.target_slope) {
    log << "; no target for an explicit (k, h) ladder\n";
    return exit_ok;
  }
  const bool pass = *report.rate_pass();
  std::snprintf(line, sizeof line, "; target %.4f, tolerance %.2f: %s\n",
                *report.target_slope, plan.tolerances.slope,
                pass ? "PASS" : "FAIL");
  log << line;
  return pass ? exit_ok : exit_threshold;
}

int run_command(const RunConfig& cfg, std::ostream& log, std::ostream& err)
{
  try {
    if (cfg.command == "simulate") {
      return cmd_simulate(cfg, log);
    }
    if (cfg.command == "estimate") {
      return cmd_estimate(cfg, log);
    }
    if (cfg.command == "experiment") {
      return cmd_experiment(cfg, log);
    }
    if (cfg.command == "rates") {
      return cmd_rates(cfg, log);
    }
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

} // namespace kfrontier::cli
