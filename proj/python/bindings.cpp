#include "kfrontier/asymptotics.hpp"
#include "kfrontier/estimator.hpp"
#include "kfrontier/experiments.hpp"
#include "kfrontier/frontier.hpp"
#include "kfrontier/kernel.hpp"
#include "kfrontier/simulate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kfrontier;

namespace {

std::vector<double> estimate_at(const std::vector<double>& maxima,
                                const std::string& kernel,
                                double h,
                                const std::string& correction,
                                double n,
                                const std::vector<double>& xs)
{
  CellMaxima m;
  m.values = maxima;
  for (std::size_t r = 0; r < maxima.size(); ++r) {
    if (maxima[r] == 0.0) {
      m.empty_cells.push_back(r);
    }
  }
  EstimatorConfig cfg{ kernel_by_name(kernel), h, maxima.size(),
                       correction_from_string(correction) };
  validate(cfg, n);
  FrontierEstimate est(std::move(m), cfg, n);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    out.push_back(est(x));
  }
  return out;
}

std::string run_experiment(const std::string& frontier,
                           const std::string& kernel,
                           double alpha,
                           const std::string& selector,
                           const std::string& correction,
                           const std::vector<double>& n_ladder,
                           std::size_t replicates,
                           std::uint64_t seed,
                           const std::vector<std::string>& statistics,
                           const std::vector<double>& points,
                           const std::vector<double>& levels,
                           std::size_t grid,
                           std::size_t workers)
{
  ExperimentPlan plan;
  plan.frontier = frontier;
  plan.kernel = kernel;
  plan.alpha = alpha;
  plan.selector = selector_from_string(selector);
  plan.correction = correction_from_string(correction);
  plan.n_ladder = n_ladder;
  plan.replicates = replicates;
  plan.seed = seed;
  plan.statistics.clear();
  for (const auto& s : statistics) {
    plan.statistics.push_back(statistic_from_string(s));
  }
  plan.eval_points = points;
  plan.levels = levels;
  plan.grid = grid;
  plan.workers = workers;
  ExperimentReport report;
  {
    py::gil_scoped_release release;
    report = run_replicates(plan);
  }
  return report_json(report);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Kernel estimation of a frontier from Poisson points";

  py::class_<FrontierSpec>(m, "Frontier")
    .def(py::init(&make_frontier), py::arg("name"))
    .def_property_readonly("id", &FrontierSpec::id)
    .def_property_readonly("alpha", &FrontierSpec::alpha)
    .def_property_readonly("lipschitz_const", &FrontierSpec::lipschitz_const)
    .def_property_readonly("lower_bound", &FrontierSpec::lower_bound)
    .def_property_readonly("upper_bound", &FrontierSpec::upper_bound)
    .def_property_readonly("area", &FrontierSpec::area)
    .def_property_readonly("normalizer", &FrontierSpec::normalizer)
    .def("__call__", &FrontierSpec::operator(), py::arg("x"))
    .def("__repr__",
         [](const FrontierSpec& f) { return "<Frontier " + f.id() + ">"; });

  py::class_<KernelSpec>(m, "Kernel")
    .def(py::init([](const std::string& name) { return kernel_by_name(name); }),
         py::arg("name"))
    .def_property_readonly("id", &KernelSpec::id)
    .def_property_readonly("support_radius", &KernelSpec::support_radius)
    .def("__call__", &KernelSpec::operator(), py::arg("u"))
    .def("l2_norm_sq",
         [](const KernelSpec& k) { return kernel_constants(k).l2_norm_sq; });

  m.def("kernel_names", &kernel_names);

  m.def(
    "sample_points",
    [](const FrontierSpec& f, double n, std::uint64_t seed) {
      const auto ps = sample_poisson(f, n, seed);
      std::vector<std::pair<double, double>> out;
      out.reserve(ps.points.size());
      for (const auto& p : ps.points) {
        out.emplace_back(p.x, p.y);
      }
      return out;
    },
    py::arg("frontier"), py::arg("n"), py::arg("seed"),
    "Poisson points inside the region under the frontier, as (x, y) pairs.");

  m.def(
    "cell_maxima",
    [](const FrontierSpec& f, double n, std::size_t k, std::uint64_t seed) {
      return sample_cell_maxima(f, n, k, seed).values;
    },
    py::arg("frontier"), py::arg("n"), py::arg("k"), py::arg("seed"),
    "Per-cell maxima of one Poisson realization (0 for empty cells).");

  m.def("estimate", &estimate_at, py::arg("maxima"), py::arg("kernel"),
        py::arg("h"), py::arg("correction"), py::arg("n"), py::arg("x"),
        "Evaluate the raw, bias or edge corrected estimator at x.");

  m.def(
    "select_hyperparams",
    [](double n, double alpha, const std::string& mode) {
      const auto hp = select_hyperparams(n, alpha, selector_from_string(mode));
      return py::make_tuple(hp.k, hp.h);
    },
    py::arg("n"), py::arg("alpha"), py::arg("mode"));

  m.def(
    "normalization",
    [](double n, std::size_t k, double h, const KernelSpec& kernel, double c) {
      const auto p = normalization(n, k, h, kernel, c);
      return py::make_tuple(p.sigma_n, p.sigma);
    },
    py::arg("n"), py::arg("k"), py::arg("h"), py::arg("kernel"),
    py::arg("c"));

  m.def(
    "cell_max_cdf",
    [](const FrontierSpec& f, std::size_t k, std::size_t r, double n,
       double x) {
      const auto v = cell_max_cdf(make_partition(f, k), r, n, x);
      return py::make_tuple(v.lower, v.upper);
    },
    py::arg("frontier"), py::arg("k"), py::arg("r"), py::arg("n"),
    py::arg("x"), "(lower, upper) bounds of P(X*_r <= x), r 0-based.");

  m.def(
    "expected_cell_max_flat",
    [](double level, double n, std::size_t k, double c) {
      const auto mm = expected_cell_max_flat(level, n, k, c);
      return py::make_tuple(mm.mean, mm.variance);
    },
    py::arg("level"), py::arg("n"), py::arg("k"), py::arg("c"));

  m.def(
    "confidence_interval",
    [](double estimate, double sigma_n, double sigma, double level) {
      const AsymptoticParams p{ sigma_n, sigma, 0.0, 0, 0.0 };
      const auto ci = confidence_interval(estimate, p, level);
      return py::make_tuple(ci.lo, ci.hi);
    },
    py::arg("estimate"), py::arg("sigma_n"), py::arg("sigma"),
    py::arg("level"));

  m.def("run_experiment", &run_experiment, py::arg("frontier") = "flat:1",
        py::arg("kernel") = "biweight", py::arg("alpha") = 1.0,
        py::arg("selector") = "mse_corrected",
        py::arg("correction") = "bias", py::arg("n_ladder"),
        py::arg("replicates"), py::arg("seed"),
        py::arg("statistics") = std::vector<std::string>{ "l1" },
        py::arg("points") = std::vector<double>{ 0.5 },
        py::arg("levels") = std::vector<double>{ 0.95 },
        py::arg("grid") = 512, py::arg("workers") = 1,
        "Run a Monte Carlo plan and return the JSON report text.");
}
