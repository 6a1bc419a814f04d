#include "bandcov/assemble.hpp"
#include "bandcov/errors.hpp"
#include "bandcov/io.hpp"
#include "bandcov/patching.hpp"
#include "bandcov/simgen.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace bandcov;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Covariance estimation for functional data observed on overlapping bands";

  auto base = py::register_exception<Error>(m, "BandcovError");
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base);
  py::register_exception<NumericError>(m, "NumericError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<ParseError>(m, "ParseError", base);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, double, double>(), py::arg("p"), py::arg("t_min") = 0.0, py::arg("t_max") = 1.0)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("points", &Grid::points)
      .def("__len__", &Grid::size);

  py::class_<Sample>(m, "Sample")
      .def(py::init([](std::string id, std::vector<int> indices, std::vector<double> values) {
             return Sample{std::move(id), std::move(indices), std::move(values)};
           }),
           py::arg("subject_id"), py::arg("indices"), py::arg("values"))
      .def_readwrite("subject_id", &Sample::subject_id)
      .def_readwrite("indices", &Sample::indices)
      .def_readwrite("values", &Sample::values);

  py::class_<ObservationSet>(m, "ObservationSet")
      .def(py::init([](const Grid& grid, std::vector<Sample> samples) {
             return ObservationSet{grid, std::move(samples)};
           }),
           py::arg("grid"), py::arg("samples"))
      .def_readonly("grid", &ObservationSet::grid)
      .def_readwrite("samples", &ObservationSet::samples)
      .def_property_readonly("n", &ObservationSet::n)
      .def("max_window_length", &ObservationSet::max_window_length)
      .def("__len__", &ObservationSet::n);

  py::enum_<PatchMode>(m, "PatchMode")
      .value("complete", PatchMode::complete)
      .value("pairwise", PatchMode::pairwise);

  py::class_<CvConfig>(m, "CvConfig")
      .def(py::init<>())
      .def_readwrite("folds", &CvConfig::folds)
      .def_readwrite("splits", &CvConfig::splits)
      .def_readwrite("min_pairs", &CvConfig::min_pairs)
      .def_readwrite("rank_candidates", &CvConfig::rank_candidates)
      .def_readwrite("seed", &CvConfig::seed);

  py::class_<EstimatorConfig>(m, "EstimatorConfig")
      .def(py::init([](int band, int increment, std::optional<int> rank, PatchMode mode, std::uint64_t seed) {
             EstimatorConfig cfg;
             cfg.band = band;
             cfg.increment = increment;
             cfg.rank = rank;
             cfg.mode = mode;
             cfg.cv.seed = seed;
             return cfg;
           }),
           py::arg("band"), py::arg("increment") = 1, py::arg("rank") = py::none(),
           py::arg("mode") = PatchMode::complete, py::arg("seed") = 0)
      .def_readwrite("band", &EstimatorConfig::band)
      .def_readwrite("increment", &EstimatorConfig::increment)
      .def_readwrite("rank", &EstimatorConfig::rank)
      .def_readwrite("mode", &EstimatorConfig::mode)
      .def_readwrite("cv", &EstimatorConfig::cv);

  py::class_<CvResult>(m, "CvResult")
      .def_readonly("errors", &CvResult::errors)
      .def_readonly("excluded", &CvResult::excluded)
      .def_readonly("chosen_r", &CvResult::chosen_r)
      .def_readonly("splits_used", &CvResult::splits_used);

  py::class_<CovarianceEstimate>(m, "CovarianceEstimate")
      .def_readonly("sigma0", &CovarianceEstimate::sigma0)
      .def_readonly("factor", &CovarianceEstimate::factor)
      .def_readonly("rank", &CovarianceEstimate::rank)
      .def_readonly("weights", &CovarianceEstimate::weights)
      .def_readonly("cv", &CovarianceEstimate::cv)
      .def_readonly("warnings", &CovarianceEstimate::warnings)
      .def_property_readonly("noise_levels",
                             [](const CovarianceEstimate& e) {
                               std::vector<double> out;
                               for (const auto& p : e.patches) out.push_back(p.sigma2);
                               return out;
                             })
      .def("surface", py::overload_cast<const CovarianceEstimate&, double, double>(&interpolate_surface),
           py::arg("s"), py::arg("t"))
      .def("metadata_json", &metadata_json);

  m.def("estimate_covariance", &estimate_covariance, py::arg("obs"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "patch_ranges",
      [](int p, int b, int a) {
        std::vector<std::pair<int, int>> out;
        for (const auto& r : build_patch_plan(p, b, a).patches) out.emplace_back(r.first + 1, r.last() + 1);
        return out;
      },
      py::arg("p"), py::arg("b"), py::arg("a"), "1-based (first, last) of each patch.");

  m.def("solve_wahba", &solve_wahba, py::arg("target"), py::arg("source"));

  m.def(
      "read_long_csv",
      [](const std::filesystem::path& path, std::optional<int> p) { return read_long_csv(path, p).obs; },
      py::arg("path"), py::arg("p") = py::none());

  m.def(
      "simulate",
      [](int d, int n_rep, int K, std::uint64_t seed) {
        const SimSetting setting = standard_setting(d, n_rep, K, seed);
        const Grid grid(setting.p);
        ObservationSet obs = sample_trajectories(setting, grid, make_design(setting.design, setting.p, seed));
        return py::make_tuple(std::move(obs), population_covariance(setting, grid));
      },
      py::arg("d"), py::arg("n_rep"), py::arg("K") = 3, py::arg("seed") = 0,
      "Balanced design on p = 30; returns (observations, true covariance).");

  m.def("rmse", &rmse, py::arg("estimate"), py::arg("truth"));
}
