#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include <pybind11/pybind11.h>

#include "pmrig/ball.hpp"
#include "pmrig/cli.hpp"
#include "pmrig/harnack.hpp"

namespace py = pybind11;
using namespace pmrig;

namespace {

py::dict rate_dict(const RateReport& r) {
  py::list samples;
  for (const auto& s : r.samples) samples.append(py::make_tuple(s.t, s.value));
  py::dict d;
  d["exponent"] = r.exponent_tested;
  d["fitted_limit"] = r.fitted_limit;
  d["fitted_slope"] = r.fitted_slope;
  d["verdict"] = to_string(r.verdict);
  d["samples"] = samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pmrig, m) {
  m.doc() = "Conformal pseudometrics on the disk and Kobayashi geometry of the ball";

  // Translators run most recent first, so the base class goes in first.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<cli::ConfigError>(m, "ConfigError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);

  py::class_<HoloMap>(m, "HoloMap")
      .def_static("parse", [](const std::string& s) { return parse_holomap(s); })
      .def_static("identity", &HoloMap::identity)
      .def_static("monomial", &HoloMap::monomial)
      .def_static("automorphism", &HoloMap::automorphism, py::arg("a"), py::arg("theta") = 0.0)
      .def_static("blaschke", &HoloMap::blaschke, py::arg("zeros"), py::arg("theta") = 0.0)
      .def_static("compose", &HoloMap::compose)
      .def("__call__", &HoloMap::operator())
      .def("derivative", [](const HoloMap& f, Complex z) { return derivative(f, z); })
      .def("hyperbolic_derivative", [](const HoloMap& f, Complex z) { return hyperbolic_derivative(f, z); })
      .def("certified", [](const HoloMap& f) { return certify_selfmap(f).certified; })
      .def("critical_points",
           [](const HoloMap& f) {
             std::vector<std::pair<Complex, int>> out;
             for (const auto& c : f.critical_points()) out.emplace_back(c.location, c.multiplicity);
             return out;
           })
      .def("__repr__", [](const HoloMap& f) { return to_text(f); });
  m.def("f_epsilon", &maps::f_epsilon);

  py::class_<Pseudometric>(m, "Pseudometric")
      .def_static("parse", [](const std::string& s) { return cli::parse_metric(s); })
      .def("__call__", &Pseudometric::density)
      .def("density", &Pseudometric::density)
      .def_property_readonly("name", &Pseudometric::name)
      .def("curvature", [](const Pseudometric& mu, Complex z) { return curvature(mu, z); })
      .def("__repr__", &Pseudometric::name);
  m.def("poincare", &poincare);
  m.def("mu_max", &mu_max);
  m.def("pullback", &pullback);
  m.def("scale", &scale);
  m.def("dilate", &dilate);
  m.def("quotient", &quotient);

  m.def(
      "rigidity_scan",
      [](const Pseudometric& lambda, const Pseudometric& mu, double c, double angle, int k_min, int k_max) {
        BoundaryPath path;
        path.angle = angle;
        path.schedule = dyadic_schedule(k_min, k_max);
        return rate_dict(rigidity_scan(lambda, mu, c, path));
      },
      py::arg("lambda_"), py::arg("mu"), py::arg("c") = 4.0, py::arg("angle") = 0.0, py::arg("k_min") = 4,
      py::arg("k_max") = 14);

  m.def("kobayashi_metric", py::overload_cast<const BallPoint&, const CVector&>(&kobayashi_metric));
  m.def("kobayashi_distance", &kobayashi_distance);
  m.def(
      "theorem_2_2_check",
      [](const std::string& map, const CVector& v) {
        const auto r = theorem_2_2_check(parse_ballmap(map), v);
        py::dict d;
        d["condition_1"] = to_string(r.condition_1);
        d["condition_2a"] = to_string(r.condition_2a);
        d["condition_2b"] = to_string(r.condition_2b);
        d["deficit"] = rate_dict(r.deficit);
        d["all_pass"] = r.all_pass();
        return d;
      },
      py::arg("map"), py::arg("v"));

  m.def(
      "run_config",
      [](const std::string& text, const std::string& output_dir) {
        cli::RunOptions opts;
        opts.output_dir = output_dir;
        const auto r = cli::run(cli::parse_config(text), opts);
        return py::make_tuple(r.exit_code, cli::to_json(r.report).dump());
      },
      py::arg("text"), py::arg("output_dir"));
  m.attr("__version__") = cli::tool_version();
}
