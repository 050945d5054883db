#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "billiards/billiard_map.hpp"
#include "billiards/error.hpp"
#include "billiards/invariants.hpp"
#include "billiards/poncelet.hpp"
#include "billiards/report.hpp"

namespace py = pybind11;
using namespace billiards;

namespace {

py::tuple as_tuple(Point2 p) { return py::make_tuple(p.x1, p.x2); }

Point2 as_point(const std::pair<double, double>& p) { return {p.first, p.second}; }

py::list points(const std::vector<Point2>& v) {
  py::list out;
  for (const auto& p : v) out.append(as_tuple(p));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Billiards in ellipses and convex tables";
  m.attr("__version__") = kLibraryVersion;
  py::register_exception<Error>(m, "BilliardsError", PyExc_RuntimeError);

  py::class_<SupportCurve>(m, "SupportCurve")
      .def_static("ellipse", &SupportCurve::ellipse, py::arg("a1"), py::arg("a2"))
      .def_static("circle", &SupportCurve::circle, py::arg("radius"))
      .def_static(
          "trig_poly",
          [](double c0, const std::vector<std::tuple<int, double, double>>& harmonics,
             std::pair<double, double> offset) {
            std::vector<Harmonic> hs;
            for (const auto& [k, a, b] : harmonics) hs.push_back({k, a, b});
            return SupportCurve::trig_poly(c0, hs, as_point(offset));
          },
          py::arg("c0"), py::arg("harmonics") = std::vector<std::tuple<int, double, double>>{},
          py::arg("origin_offset") = std::pair<double, double>{0.0, 0.0})
      .def("eval",
           [](const SupportCurve& c, double psi) {
             const auto v = c.eval(psi);
             return py::make_tuple(v.h, v.h1, v.h2);
           })
      .def_property_readonly("is_ellipse", &SupportCurve::is_ellipse)
      .def_property_readonly("diameter", &SupportCurve::diameter)
      .def("point", [](const SupportCurve& c, double psi) { return as_tuple(curve_point(c, psi)); });

  m.def("random_trig_poly", &random_trig_poly, py::arg("seed"), py::arg("harmonics"),
        py::arg("c0") = 1.0);
  m.def("generating_function", &generating_function);
  m.def("gen_partials", [](const SupportCurve& c, double phi1, double phi2) {
    const auto p = gen_partials(c, phi1, phi2);
    return py::make_tuple(p.p1, p.p2);
  });
  m.def("map_line", [](const SupportCurve& c, double p, double phi) {
    const auto line = map_line(c, OrientedLine(p, phi));
    return py::make_tuple(line.p(), line.phi());
  });
  m.def(
      "jacobian_det",
      [](const SupportCurve& c, double p, double phi, double step) {
        return jacobian_det(c, OrientedLine(p, phi), step);
      },
      py::arg("curve"), py::arg("p"), py::arg("phi"), py::arg("step") = 1e-5);
  m.def("reflect", [](const SupportCurve& c, double psi, double theta) {
    const auto s = reflect(c, {psi, theta});
    return py::make_tuple(s.psi, s.theta);
  });

  py::class_<Caustic>(m, "Caustic")
      .def_readonly("ac", &Caustic::ac)
      .def_readonly("bc", &Caustic::bc)
      .def_readonly("lambda_", &Caustic::lambda)
      .def("invariant_angle", &Caustic::invariant_angle);

  py::class_<PonceletFamily>(m, "PonceletFamily")
      .def_readonly("table", &PonceletFamily::table)
      .def_readonly("caustic", &PonceletFamily::caustic)
      .def_readonly("n", &PonceletFamily::n)
      .def_readonly("k", &PonceletFamily::k)
      .def_readonly("J", &PonceletFamily::J);

  py::class_<BilliardPolygon>(m, "BilliardPolygon")
      .def_readonly("n", &BilliardPolygon::n)
      .def_readonly("winding", &BilliardPolygon::winding)
      .def_property_readonly("vertices", [](const BilliardPolygon& p) { return points(p.vertices); })
      .def_readonly("psis", &BilliardPolygon::psis)
      .def_readonly("deltas", &BilliardPolygon::deltas)
      .def_readonly("perimeter", &BilliardPolygon::perimeter)
      .def_readonly("closure_residual", &BilliardPolygon::closure_residual)
      .def_readonly("phase", &BilliardPolygon::phase);

  m.def("rotation_number", &rotation_number, py::arg("ellipse"), py::arg("lam"),
        py::arg("iterations") = 2048);
  m.def("find_caustic", &find_caustic, py::arg("ellipse"), py::arg("n"), py::arg("k"),
        py::arg("tol") = 1e-10);
  m.def("build_orbit", &build_orbit);
  m.def("build_orbit_at_vertex", &build_orbit_at_vertex);
  m.def(
      "family_sweep",
      [](const PonceletFamily& f, int samples, bool invariant_angle) {
        return family_sweep(f, samples, Execution::Sequential,
                            invariant_angle ? Sampling::InvariantAngle : Sampling::TangencyPhase);
      },
      py::arg("family"), py::arg("samples"), py::arg("invariant_angle") = false);
  m.def("birkhoff_orbit", &birkhoff_orbit, py::arg("curve"), py::arg("n"), py::arg("k"),
        py::arg("seed") = 1);

  m.def("check_theorem1", [](const SupportCurve& c, const BilliardPolygon& p) {
    const auto r = check_theorem1(c, p);
    return py::make_tuple(r.sum_s_minus_l, r.sum_hprime_sin);
  });
  m.def("product_cos_beta", &product_cos_beta);
  m.def("check_eq_sin",
        py::overload_cast<const PonceletFamily&, int, int, int>(&check_eq_sin));
  m.def("pedal_stats", [](const BilliardPolygon& p, std::pair<double, double> P) {
    const auto s = pedal_stats(p, as_point(P));
    return py::make_tuple(as_tuple(s.center_of_mass), s.sum_sq);
  });
  m.def("focal_products", [](const BilliardPolygon& p, const PonceletFamily& f) {
    const auto r = focal_products(p, f.table, f.caustic);
    return py::make_tuple(r.prod_f1, r.prod_f2, r.prod_o);
  });
  m.def("verify_family_json", [](const PonceletFamily& f, int samples, double tol) {
    VerifyOptions options;
    options.samples = samples;
    options.tol = tol;
    return to_json(verify_family(f, options)).dump();
  });
}
