// Python extension module. Reports cross the boundary as JSON text and are
// decoded on the Python side; jets and expression derivatives come back as
// NumPy arrays.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <string>
#include <vector>

#include "symphonic/analysis.hpp"
#include "symphonic/autodiff.hpp"
#include "symphonic/config.hpp"
#include "symphonic/errors.hpp"
#include "symphonic/expr.hpp"
#include "symphonic/identities.hpp"
#include "symphonic/maps.hpp"
#include "symphonic/runner.hpp"
#include "symphonic/sampling.hpp"
#include "symphonic/serialize.hpp"
#include "symphonic/zoo.hpp"

namespace py = pybind11;
using namespace symphonic;

namespace {

PointSet draw(const MapPtr& u, std::size_t samples, std::uint64_t seed) {
  return sample_box(u->source().sampling_box(), samples, seed);
}

IdentityKind identity_kind(const std::string& name) {
  if (auto k = identity_from_name(name)) return *k;
  throw ArgumentError("unknown identity '" + name + "'");
}

std::string verify_json(const std::string& identity, const std::string& u, const std::string& f,
                        double p, int m, std::size_t samples, std::uint64_t seed, double tol) {
  IdentityCase c;
  c.kind = identity_kind(identity);
  c.u = zoo::map(u);
  c.f = zoo::map(f);
  c.p = p;
  c.m = m;
  c.sample_count = samples;
  c.seed = seed;
  c.tol = tol;
  return to_json(verify(c)).dump();
}

std::string sweep_json(const std::string& identity, const std::string& family, const std::string& f,
                       const std::vector<double>& lambdas, double p, int m, std::size_t samples,
                       std::uint64_t seed, double tol) {
  IdentityCase c;
  c.kind = identity_kind(identity);
  c.f = zoo::map(f);
  c.p = p;
  c.m = m;
  c.sample_count = samples;
  c.seed = seed;
  c.tol = tol;
  return to_json(exponent_sweep(c, zoo::family(family), lambdas)).dump();
}

std::string predicate_json(const std::string& predicate, const std::string& map, double p,
                           std::size_t samples, std::uint64_t seed, double tol) {
  const auto u = zoo::map(map);
  const auto pts = draw(u, samples, seed);
  if (predicate == "p_symphonic") return to_json(is_p_symphonic(u, p, pts, tol)).dump();
  if (predicate == "horizontally_conformal") return to_json(horizontal_conformality(*u, pts, tol)).dump();
  if (predicate == "totally_geodesic") return to_json(is_totally_geodesic(*u, pts, tol)).dump();
  if (predicate == "conformal_function") return to_json(is_conformal_function(*u, pts, tol)).dump();
  if (predicate == "morphism_probe") return to_json(morphism_probe_test(u, p, pts, tol)).dump();
  throw ArgumentError("unknown predicate '" + predicate + "'");
}

py::dict jet_dict(const std::string& map, const std::vector<double>& x) {
  const auto u = zoo::map(map);
  const auto jet = map_jet(*u, std::span<const double>(x));
  py::dict out;
  out["image"] = jet.image;
  out["du"] = jet.du;
  out["ddu"] = jet.ddu;
  out["pullback"] = jet.pullback;
  out["second_fundamental_form"] = jet.second_fund;
  out["P"] = jet.P;
  return out;
}

std::string run_config_json(const std::string& yaml_text) {
  return run(parse_config(yaml_text)).report.dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical checks for composition identities of smooth maps";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<SingularWeightError>(m, "SingularWeightError", error.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", error.ptr());

  py::class_<expr::Expression>(m, "Expression")
      .def_property_readonly("arity", &expr::Expression::arity)
      .def_property_readonly("source", &expr::Expression::source)
      .def("canonical", &expr::Expression::to_string)
      .def("__call__",
           [](const expr::Expression& e, const std::vector<double>& x) {
             return e.evaluate(std::span<const double>(x));
           })
      .def("jet",
           [](const expr::Expression& e, const std::vector<double>& x) {
             const auto j = evaluate_jet2(e, std::span<const double>(x));
             return py::make_tuple(j.value, j.grad, j.hess);
           },
           "Value, gradient and Hessian at x.")
      .def("__repr__", [](const expr::Expression& e) { return "Expression(" + e.to_string() + ")"; });

  m.def("parse", [](const std::string& src, std::size_t arity) { return expr::parse(src, arity); },
        py::arg("source"), py::arg("arity"));

  m.def("zoo_catalog_json", [] {
    Json out = Json::array();
    for (const auto& e : zoo::catalog()) out.push_back(to_json(e));
    return out.dump();
  });
  m.def("identity_names", &identity_names);
  m.def("map_jet", &jet_dict, py::arg("map"), py::arg("x"));

  m.def("verify_json", &verify_json, py::arg("identity"), py::arg("u"), py::arg("f"),
        py::arg("p") = 2.0, py::arg("m") = 2, py::arg("samples") = default_sample_count,
        py::arg("seed") = 0, py::arg("tol") = 1e-7);
  m.def("sweep_json", &sweep_json, py::arg("identity"), py::arg("family"), py::arg("f"),
        py::arg("lambdas"), py::arg("p") = 2.0, py::arg("m") = 2,
        py::arg("samples") = default_sample_count, py::arg("seed") = 0, py::arg("tol") = 1e-7);
  m.def("predicate_json", &predicate_json, py::arg("predicate"), py::arg("map"),
        py::arg("p") = 2.0, py::arg("samples") = default_sample_count, py::arg("seed") = 0,
        py::arg("tol") = 1e-7);
  m.def("run_config_json", &run_config_json, py::arg("yaml_text"));

  m.attr("report_schema_version") = report_schema_version;
}
