// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bibc/channel.hpp"
#include "bibc/detector.hpp"
#include "bibc/error.hpp"
#include "bibc/experiments.hpp"
#include "bibc/geometry.hpp"
#include "bibc/kvformat.hpp"
#include "bibc/metrics.hpp"
#include "bibc/selection.hpp"

namespace py = pybind11;
using namespace bibc;

namespace {

void bind_geometry(py::module_& m) {
  py::class_<Point>(m, "Point")
      .def(py::init<>())
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def("__eq__", [](const Point& a, const Point& b) { return a == b; })
      .def("__iter__", [](const Point& p) { return py::iter(py::make_tuple(p.x, p.y)); })
      .def("__repr__", [](const Point& p) {
        return "Point(" + format_number(p.x) + ", " + format_number(p.y) + ")";
      });

  py::class_<Rectangle>(m, "Rectangle")
      .def(py::init<Point, double, double>(), py::arg("center"), py::arg("width"),
           py::arg("height"))
      .def_property_readonly("center", &Rectangle::center)
      .def_property_readonly("width", &Rectangle::width)
      .def_property_readonly("height", &Rectangle::height)
      .def("contains", &Rectangle::contains, py::arg("p"), py::arg("tol") = 0.0)
      .def("clamp", &Rectangle::clamp);

  py::class_<Deployment>(m, "Deployment")
      .def(py::init<std::vector<Point>, int, Rectangle>(), py::arg("aps"),
           py::arg("antennas_per_ap"), py::arg("coverage"))
      .def_property_readonly("aps", [](const Deployment& d) {
        return std::vector<Point>(d.aps().begin(), d.aps().end());
      })
      .def_property_readonly("antennas", &Deployment::antennas)
      .def_property_readonly("coverage", &Deployment::coverage)
      .def("__len__", &Deployment::size)
      .def("to_text", [](const Deployment& d) { return deployment_to_document(d).to_string(); })
      .def_static("from_text", [](const std::string& text) {
        return deployment_from_document(KeyValueDocument::parse_string(text));
      });

  m.def("distance", &distance);
  m.def("path_gain", &path_gain);
  m.def("nearest_ap", py::overload_cast<const Deployment&, Point>(&nearest_ap));
  m.def("boundary_points", &boundary_points, py::arg("region"), py::arg("step"));
  m.def("partition_centroids", &partition_centroids, py::arg("region"), py::arg("nx"),
        py::arg("ny"));
}

void bind_metrics(py::module_& m) {
  m.def("lambda1", [](const Deployment& d, Point p, const std::vector<std::size_t>& ce) {
    return lambda1(d, p, ce);
  });
  m.def("lambda2", &lambda2, py::arg("deployment"), py::arg("bd"), py::arg("slots"));
  m.def("lambda3", [](const Deployment& d, Point p, const std::vector<std::size_t>& ce) {
    return lambda3(d, p, ce);
  });
  m.def("pair_metric", &pair_metric);
  m.def("received_snr", &received_snr, py::arg("deployment"), py::arg("t"), py::arg("r"),
        py::arg("p"), py::arg("transmit_power"), py::arg("slot_length"));
}

void bind_detector(py::module_& m) {
  py::enum_<ReaderPolicy>(m, "ReaderPolicy")
      .value("AllOthers", ReaderPolicy::AllOthers)
      .value("Complement", ReaderPolicy::Complement)
      .value("Explicit", ReaderPolicy::Explicit);

  py::class_<DetectorConfig>(m, "DetectorConfig")
      .def(py::init<>())
      .def_readwrite("gamma0", &DetectorConfig::gamma0)
      .def_readwrite("gamma1", &DetectorConfig::gamma1)
      .def_readwrite("prior0", &DetectorConfig::prior0)
      .def_readwrite("prior1", &DetectorConfig::prior1)
      .def_readwrite("ce_set", &DetectorConfig::ce_set)
      .def_readwrite("reader_policy", &DetectorConfig::reader_policy)
      .def_readwrite("readers", &DetectorConfig::readers);

  py::class_<PeResult>(m, "PeResult")
      .def_readonly("pe", &PeResult::pe)
      .def_readonly("argument", &PeResult::argument);

  py::class_<ProbingSignal>(m, "ProbingSignal")
      .def_property_readonly("matrix", &ProbingSignal::matrix)
      .def_property_readonly("energy", &ProbingSignal::energy)
      .def_property_readonly("transmit_power", &ProbingSignal::transmit_power)
      .def_property_readonly("slot_length", &ProbingSignal::slot_length);
  m.def("make_probing_signal", &make_probing_signal, py::arg("antennas"), py::arg("slot_length"),
        py::arg("transmit_power"));

  py::class_<OrthogonalSequenceSet>(m, "OrthogonalSequenceSet")
      .def_readonly("coefficients", &OrthogonalSequenceSet::coefficients)
      .def_readonly("power_coefficient", &OrthogonalSequenceSet::power_coefficient);
  m.def("make_orthogonal_sequences", &make_orthogonal_sequences, py::arg("slots"));

  m.def("q_function", &q_function);
  m.def("closed_form_pe",
        py::overload_cast<const Deployment&, Point, const DetectorConfig&, double>(
            &closed_form_pe),
        py::arg("deployment"), py::arg("bd"), py::arg("config"), py::arg("transmit_energy"));
  m.def("closed_form_pe_case3", &closed_form_pe_case3);

  py::class_<BerEstimate>(m, "BerEstimate")
      .def_readonly("ber", &BerEstimate::ber)
      .def_readonly("half_width", &BerEstimate::half_width)
      .def_readonly("errors", &BerEstimate::errors)
      .def_readonly("trials", &BerEstimate::trials);
  m.def("monte_carlo_ber", &monte_carlo_ber, py::arg("deployment"), py::arg("bd"),
        py::arg("config"), py::arg("probing"), py::arg("trials"), py::arg("seed"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
}

void bind_selection(py::module_& m) {
  py::class_<PgdSettings>(m, "PgdSettings")
      .def(py::init<>())
      .def_readwrite("learning_rate", &PgdSettings::learning_rate)
      .def_readwrite("max_iterations", &PgdSettings::max_iterations)
      .def_readwrite("convergence_tol", &PgdSettings::convergence_tol)
      .def_readwrite("starts_x", &PgdSettings::starts_x)
      .def_readwrite("starts_y", &PgdSettings::starts_y)
      .def_readwrite("max_backtracks", &PgdSettings::max_backtracks);

  py::class_<CeSelection>(m, "CeSelection")
      .def_readonly("ce_index", &CeSelection::ce_index)
      .def_readonly("worst_point", &CeSelection::worst_point)
      .def_readonly("worst_value", &CeSelection::worst_value);
  py::class_<CeSelectionReport>(m, "CeSelectionReport")
      .def_readonly("best", &CeSelectionReport::best)
      .def_readonly("candidates", &CeSelectionReport::candidates);

  py::class_<GridMinimum>(m, "GridMinimum")
      .def_readonly("point", &GridMinimum::point)
      .def_readonly("value", &GridMinimum::value);

  py::class_<PairSelection>(m, "PairSelection")
      .def_readonly("ce_index", &PairSelection::ce_index)
      .def_readonly("reader_index", &PairSelection::reader_index)
      .def_readonly("worst_point", &PairSelection::worst_point)
      .def_readonly("worst_value", &PairSelection::worst_value)
      .def_readonly("candidate_set", &PairSelection::candidate_set)
      .def_readonly("kappa", &PairSelection::kappa);

  m.def("opc1_objective", [](const Deployment& d, std::size_t t, Point p) {
    const auto e = opc1_objective(d, t, p);
    return py::make_tuple(e.value, e.gradient);
  });
  m.def("pgd_minimize",
        [](const Deployment& d, std::size_t t, const Rectangle& r, const PgdSettings& s) {
          return pgd_minimize(d, t, r, s);
        },
        py::arg("deployment"), py::arg("t"), py::arg("region"), py::arg("settings") = PgdSettings{});
  m.def("grid_search_min", &grid_search_min, py::arg("deployment"), py::arg("t"),
        py::arg("region"), py::arg("resolution"));
  m.def("select_ce", &select_ce, py::arg("deployment"), py::arg("region"),
        py::arg("settings") = PgdSettings{}, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("select_pair",
        py::overload_cast<const Deployment&, const Rectangle&, int, double>(&select_pair),
        py::arg("deployment"), py::arg("region"), py::arg("kappa"), py::arg("boundary_step"));
  m.def("benchmark_pair",
        py::overload_cast<const Deployment&, const Rectangle&, double>(&benchmark_pair),
        py::arg("deployment"), py::arg("region"), py::arg("boundary_step"));
  m.def("exhaustive_pair",
        py::overload_cast<const Deployment&, const Rectangle&, double>(&exhaustive_pair),
        py::arg("deployment"), py::arg("region"), py::arg("boundary_step"));
  m.def("default_boundary_step", &default_boundary_step);
  m.def("snr_gap_db", &snr_gap_db);
}

void bind_experiments(py::module_& m) {
  py::class_<CampaignConfig>(m, "CampaignConfig")
      .def(py::init<>())
      .def_readwrite("k_list", &CampaignConfig::k_list)
      .def_readwrite("kappa_list", &CampaignConfig::kappa_list)
      .def_readwrite("coverage_side", &CampaignConfig::coverage_side)
      .def_readwrite("region_side", &CampaignConfig::region_side)
      .def_readwrite("antennas", &CampaignConfig::antennas)
      .def_readwrite("gamma0", &CampaignConfig::gamma0)
      .def_readwrite("gamma1", &CampaignConfig::gamma1)
      .def_readwrite("snr_db", &CampaignConfig::snr_db)
      .def_readwrite("n_deployments", &CampaignConfig::n_deployments)
      .def_readwrite("seed", &CampaignConfig::seed)
      .def_readwrite("target_pe", &CampaignConfig::target_pe)
      .def_readwrite("boundary_step", &CampaignConfig::boundary_step)
      .def_static("snr_grid", &CampaignConfig::snr_grid)
      .def_static("from_text", [](const std::string& text) {
        return CampaignConfig::from_document(KeyValueDocument::parse_string(text));
      });

  py::class_<CampaignCurves>(m, "CampaignCurves")
      .def_readonly("num_aps", &CampaignCurves::num_aps)
      .def_readonly("snr_db", &CampaignCurves::snr_db)
      .def_readonly("pe_benchmark", &CampaignCurves::pe_benchmark)
      .def_readonly("pe_optimal", &CampaignCurves::pe_optimal)
      .def_readonly("gap_db", &CampaignCurves::gap_db)
      .def_readonly("optimality_rate", &CampaignCurves::optimality_rate)
      .def_readonly("mean_instance_gap_db", &CampaignCurves::mean_instance_gap_db);
  py::class_<CampaignResult>(m, "CampaignResult")
      .def_readonly("config", &CampaignResult::config)
      .def_readonly("per_k", &CampaignResult::per_k);
  m.def("run_campaign", &run_campaign, py::arg("config"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<PeCurve>(m, "PeCurve")
      .def_readonly("label", &PeCurve::label)
      .def_readonly("snr_db", &PeCurve::snr_db)
      .def_readonly("pe", &PeCurve::pe);
  m.def("pair_pe_curve",
        py::overload_cast<const Deployment&, const PairSelection&, const std::vector<double>&,
                          double, double>(&pe_curve),
        py::arg("deployment"), py::arg("pair"), py::arg("snr_db"), py::arg("gamma0") = 0.0,
        py::arg("gamma1") = 1.0);
  m.def("snr_at_pe", &snr_at_pe);

  py::class_<HeatmapGrid>(m, "HeatmapGrid")
      .def_readonly("nx", &HeatmapGrid::nx)
      .def_readonly("ny", &HeatmapGrid::ny)
      .def_readonly("values", &HeatmapGrid::values)
      .def_readonly("pe", &HeatmapGrid::pe)
      .def_readonly("argmin", &HeatmapGrid::argmin)
      .def("cell_center", &HeatmapGrid::cell_center);
  m.def("emit_heatmap", &emit_heatmap, py::arg("deployment"), py::arg("region"),
        py::arg("ce_index"), py::arg("nx"), py::arg("ny"), py::arg("snr_db") = py::none(),
        py::arg("gamma0") = 0.0, py::arg("gamma1") = 1.0);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bistatic backscatter AP selection in cell-free MIMO";
  m.attr("__version__") = "0.1.0";
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);

  bind_geometry(m);
  bind_metrics(m);
  bind_detector(m);
  bind_selection(m);
  bind_experiments(m);
}
