#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using kfrontier::cli::RunConfig;

int main(int argc, char** argv)
{
  CLI::App app{ "Kernel frontier estimation from Poisson point processes" };
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "TOML or INI file; flags override it");
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--frontier", cfg.frontier,
                 "flat:L, affine:a:b, sine:a:b:w, tent:a:b:p, cusp:a:b:alpha, "
                 "weierstrass:a:b:alpha:terms")
    ->capture_default_str();
  app.add_option("--kernel", cfg.kernel,
                 "uniform, triangular, epanechnikov, biweight or gaussian")
    ->capture_default_str();
  app.add_option("--n", cfg.n, "Intensity of the point process");
  app.add_option("--k", cfg.k, "Number of cells (one per ladder entry)")
    ->delimiter(',');
  app.add_option("--h", cfg.h, "Bandwidth (one per ladder entry)")
    ->delimiter(',');
  app.add_option("--selector", cfg.selector,
                 "mse_raw or mse_corrected; exclusive with --k/--h");
  app.add_option("--alpha", cfg.alpha, "Hoelder exponent of the frontier")
    ->capture_default_str();
  app.add_option("--correction", cfg.correction, "raw, bias or edge")
    ->capture_default_str();
  app.add_option("--sampling", cfg.sampling, "poisson or binomial")
    ->capture_default_str();
  app.add_option("--grid", cfg.grid, "Evaluation grid size")
    ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--replicates", cfg.replicates, "Replicates per intensity")
    ->capture_default_str();
  app.add_option("--n-ladder", cfg.n_ladder, "Increasing intensities")
    ->delimiter(',');
  app.add_option("--statistics", cfg.statistics,
                 "l1, pointwise, coverage, normality, vector_normality")
    ->delimiter(',');
  app.add_option("--points-at", cfg.eval_points,
                 "Abscissae for pointwise statistics")
    ->delimiter(',');
  app.add_option("--levels", cfg.levels, "Coverage levels")->delimiter(',');
  app.add_option("--level", cfg.level, "CI level in the estimate summary")
    ->capture_default_str();
  app.add_option("--points", cfg.points, "Input points CSV for estimate");
  app.add_option("--workers", cfg.workers, "Replicate threads (0: all cores)")
    ->capture_default_str();
  app.add_option("--output-dir", cfg.output_dir, "Output directory")
    ->capture_default_str();

  for (const char* name : { "simulate", "estimate", "experiment", "rates" }) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("simulate")->description("Sample a point set");
  app.get_subcommand("estimate")->description("Estimate the frontier once");
  app.get_subcommand("experiment")->description("Run a Monte Carlo plan");
  app.get_subcommand("rates")
    ->description("Fit the L1 rate and compare it with its target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kfrontier::cli::exit_validation;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return kfrontier::cli::run_command(cfg, std::cout, std::cerr);
}
