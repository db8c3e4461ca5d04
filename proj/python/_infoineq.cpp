#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "infoineq/cli.hpp"
#include "infoineq/errors.hpp"
#include "infoineq/escort.hpp"
#include "infoineq/report_io.hpp"
#include "infoineq/verify.hpp"

namespace py = pybind11;
using namespace infoineq;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Statistic callable_statistic(const py::function& fn) {
  Statistic s;
  s.name = "python";
  s.eval = [fn](Point x) { return fn(x[0]).cast<double>(); };
  return s;
}

BaseDensity callable_density(const py::function& pdf, double lo, double hi) {
  return {"python", [pdf](double x) { return pdf(x).cast<double>(); }, {lo, hi}, {}};
}

}  // namespace

PYBIND11_MODULE(_infoineq, m) {
  m.doc() = "Generalized information inequalities";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SupportViolation>(m, "SupportViolation", base.ptr());
  py::register_exception<NoValidEscort>(m, "NoValidEscort", base.ptr());
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", base.ptr());

  m.def("list_models", [] {
    py::list out;
    for (const auto& i : catalog_index()) {
      py::dict d;
      d["name"] = i.name;
      d["signature"] = i.signature;
      d["summary"] = i.summary;
      out.append(d);
    }
    return out;
  });

  m.def(
      "bound",
      [](const std::string& model, double theta, const Hyper& hyper, const std::string& method, int order,
         const std::vector<double>& nodes, bool self_pair, bool numeric_lambda, std::optional<long> truncation) {
        cli::BoundRequest r{model, hyper, method, order, nodes, self_pair, numeric_lambda, truncation};
        return to_python(to_json(cli::compute_bound(r, theta)));
      },
      py::arg("model"), py::arg("theta"), py::arg("hyper") = Hyper{}, py::arg("method") = "naudts",
      py::arg("order") = 1, py::arg("nodes") = std::vector<double>{}, py::arg("self_pair") = false,
      py::arg("numeric_lambda") = false, py::arg("truncation") = std::nullopt);

  m.def(
      "variance",
      [](const std::string& model, double theta, const Hyper& hyper) {
        const auto e = catalog_lookup(model, hyper);
        const ParamVector th{theta};
        e.escort.f.domain.require(th);
        return variance_of(e.statistic, e.escort.f, th).value;
      },
      py::arg("model"), py::arg("theta"), py::arg("hyper") = Hyper{});

  m.def(
      "mc_expectation",
      [](const std::string& model, double theta, const Hyper& hyper, int power, long samples, std::uint64_t seed) {
        const auto e = catalog_lookup(model, hyper);
        const ParamVector th{theta};
        e.escort.f.domain.require(th);
        McSettings s;
        s.sample_count = samples;
        s.seed = seed;
        const Statistic t = e.statistic;
        return to_python(to_json(mc_expectation(e.escort.f, [t, power](Point x) { return std::pow(t(x), power); }, th, s)));
      },
      py::arg("model"), py::arg("theta"), py::arg("hyper") = Hyper{}, py::arg("power") = 1,
      py::arg("samples") = McSettings{}.sample_count, py::arg("seed") = McSettings{}.seed);

  m.def(
      "attainment_suite",
      [](const std::string& model, const std::vector<double>& thetas, const Hyper& hyper) {
        const auto e = catalog_lookup(model, hyper);
        std::vector<double> grid = thetas;
        if (grid.empty()) {
          for (const auto& p : e.reference_points) grid.push_back(p[0]);
        }
        return to_python(to_json(attainment_suite(e, grid)));
      },
      py::arg("model"), py::arg("thetas") = std::vector<double>{}, py::arg("hyper") = Hyper{});

  m.def("reduction_suite", [] { return to_python(to_json(reduction_suite())); });

  py::class_<SynthesizedDensity>(m, "SynthesizedDensity")
      .def_property_readonly("normalizer", &SynthesizedDensity::normalizer)
      .def_property_readonly("orientation", &SynthesizedDensity::orientation)
      .def_property_readonly("nodes", &SynthesizedDensity::nodes)
      .def_property_readonly("scale", [](const SynthesizedDensity& s) { return s.family_rule() == FamilyRule::scale; })
      .def("g", &SynthesizedDensity::g, py::arg("x"))
      .def("density", &SynthesizedDensity::density, py::arg("x"), py::arg("theta"))
      .def("to_csv", [](const SynthesizedDensity& s) {
        std::ostringstream out;
        s.write_csv(out);
        return out.str();
      });

  m.def(
      "synth_location",
      [](const py::function& pdf, const py::function& statistic, double phi0, double lo, double hi) {
        return synth_location(callable_density(pdf, lo, hi), callable_statistic(statistic), phi0);
      },
      py::arg("pdf"), py::arg("statistic"), py::arg("phi0"), py::arg("lo"), py::arg("hi"));
  m.def(
      "synth_scale",
      [](const py::function& pdf, const py::function& statistic, double phi1, double lo, double hi) {
        return synth_scale(callable_density(pdf, lo, hi), callable_statistic(statistic), phi1);
      },
      py::arg("pdf"), py::arg("statistic"), py::arg("phi1"), py::arg("lo"), py::arg("hi"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
