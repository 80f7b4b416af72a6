#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kfrontier::cli {

//! Process exit codes.
enum ExitCode : int
{
  exit_ok = 0,
  exit_validation = 2,
  exit_runtime = 3,
  exit_threshold = 4
};

struct RunConfig
{
  std::string command;
  std::string frontier = "flat:1";
  std::string kernel = "biweight";
  std::optional<double> n;
  //! Explicit cells and bandwidths: one value for `estimate`, one per ladder
  //! entry for `experiment` / `rates`. Exclusive with `selector`.
  std::vector<std::size_t> k;
  std::vector<double> h;
  std::optional<std::string> selector;
  double alpha = 1.0;
  std::string correction = "raw";
  std::string sampling = "poisson";
  std::size_t grid = 512;
  std::optional<std::uint64_t> seed;
  std::size_t replicates = 100;
  std::vector<double> n_ladder;
  std::vector<std::string> statistics{ "l1" };
  std::vector<double> eval_points{ 0.5 };
  std::vector<double> levels{ 0.95 };
  double level = 0.95; //!< CI level reported by `estimate`
  std::optional<std::filesystem::path> points;
  std::size_t workers = 1;
  std::filesystem::path output_dir = ".";
};

//! points.csv and points.json
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
//! estimate.csv and summary.json
int cmd_estimate(const RunConfig& cfg, std::ostream& log);
//! report.json, replicates.csv and rates.csv
int cmd_experiment(const RunConfig& cfg, std::ostream& log);
//! As cmd_experiment, then prints the fitted slope against its target and
//! returns exit_threshold when it falls outside the tolerance.
int cmd_rates(const RunConfig& cfg, std::ostream& log);

//! Dispatches on cfg.command and maps exceptions to exit codes, printing
//! the message to `err`.
int run_command(const RunConfig& cfg, std::ostream& log, std::ostream& err);

} // namespace kfrontier::cli
