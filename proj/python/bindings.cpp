#include "olb/action.hpp"
#include "olb/billiard.hpp"
#include "olb/errors.hpp"
#include "olb/expansions.hpp"
#include "olb/generating.hpp"
#include "olb/lazutkin.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace olb;

namespace {

py::dict orbit_dict(const OrbitConfig& o) {
    py::dict d;
    d["q"] = o.q;
    d["s"] = o.s;
    d["theta"] = o.theta;
    d["beta"] = o.beta();
    d["beta_excess"] = o.beta_excess();
    d["action"] = o.action;
    d["residual"] = o.residual;
    d["iterations"] = o.iterations;
    d["hessian_psd"] = o.hessian_psd;
    return d;
}

py::tuple xy(const Vec2& v) { return py::make_tuple(v.x(), v.y()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Outer length billiard: map, generating function, action spectrum and caustics";

    static py::exception<Error> error(m, "OlbError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::class_<CurveSpec>(m, "CurveSpec")
        .def_static("circle", &CurveSpec::circle, py::arg("radius") = 1.0)
        .def_static("ellipse", &CurveSpec::ellipse, py::arg("a"), py::arg("b"))
        .def_static(
            "fourier",
            [](const std::vector<std::tuple<int, double, double>>& rows) {
                std::vector<FourierTerm> terms;
                for (auto [n, c, s] : rows) terms.push_back({n, c, s});
                return CurveSpec::fourier(std::move(terms));
            },
            py::arg("coeffs"), "support function from [(n, cos_coeff, sin_coeff), ...]")
        .def_static("perturbed_circle", &CurveSpec::perturbed_circle, py::arg("amplitude"), py::arg("harmonic") = 3)
        .def_static(
            "from_json", [](const std::string& text) { return parse_curve_spec(nlohmann::json::parse(text)); },
            py::arg("text"))
        .def("to_json", [](const CurveSpec& s) { return to_json(s).dump(); })
        .def("__repr__", [](const CurveSpec& s) { return "CurveSpec(" + to_json(s).dump() + ")"; });

    py::class_<CurveModel>(m, "Curve")
        .def(py::init([](const CurveSpec& spec, int resolution) { return CurveModel::build(spec, resolution); }),
             py::arg("spec"), py::arg("resolution") = CurveModel::kDefaultResolution)
        .def_property_readonly("length", &CurveModel::length)
        .def_property_readonly("lazutkin_constant", &CurveModel::lazutkin_constant)
        .def_property_readonly("min_curvature", &CurveModel::min_curvature)
        .def_property_readonly("max_curvature", &CurveModel::max_curvature)
        .def_property_readonly("spec", &CurveModel::spec)
        .def("point", [](const CurveModel& c, double s) { return xy(c.jet_at(s, 0).point()); }, py::arg("s"))
        .def("curvature", [](const CurveModel& c, double s) { return c.jet_at(s, 0).k; }, py::arg("s"))
        .def("angle_at_arclength", &CurveModel::angle_at_arclength, py::arg("s"))
        .def("arclength_at_angle", &CurveModel::arclength_at_angle, py::arg("theta"))
        .def("antipodal", &CurveModel::antipodal, py::arg("s"));

    m.def("generating_function", &eval_H, py::arg("curve"), py::arg("s0"), py::arg("s1"));
    m.def(
        "generating_jet",
        [](const CurveModel& c, double s0, double s1) {
            const HJet j = eval_H_jet(c, s0, s1);
            py::dict d;
            d["H"] = j.H;
            d["H1"] = j.H1;
            d["H2"] = j.H2;
            d["H11"] = j.H11;
            d["H12"] = j.H12;
            d["H22"] = j.H22;
            return d;
        },
        py::arg("curve"), py::arg("s0"), py::arg("s1"));
    m.def("taylor_H", &taylor_H, py::arg("curve"), py::arg("s0"), py::arg("delta"));
    m.def("mather_criterion", &mather_criterion, py::arg("curve"), py::arg("s0"), py::arg("s1"));

    m.def(
        "step",
        [](const CurveModel& c, double s0, double s1) {
            const PhasePair p = step(c, PhasePair::from_endpoints(s0, s1));
            return py::make_tuple(p.s0, p.s1());
        },
        py::arg("curve"), py::arg("s0"), py::arg("s1"));
    m.def(
        "tangent_intersection", [](const CurveModel& c, double s0, double s1) { return xy(tangent_intersection(c, s0, s1)); },
        py::arg("curve"), py::arg("s0"), py::arg("s1"));
    m.def(
        "iterate",
        [](const CurveModel& c, double s0, double s1, int n) {
            const OrbitTrace t = iterate(c, PhasePair::from_endpoints(s0, s1), n);
            std::ostringstream out;
            t.write_csv(out);
            return out.str();
        },
        py::arg("curve"), py::arg("s0"), py::arg("s1"), py::arg("steps"), "orbit as CSV text");
    m.def(
        "pair_from_point",
        [](const CurveModel& c, double x, double y) {
            const PhasePair p = pair_from_exterior_point(c, Vec2(x, y));
            return py::make_tuple(p.s0, p.s1());
        },
        py::arg("curve"), py::arg("x"), py::arg("y"));

    m.def("lazutkin_x", &lazutkin_x, py::arg("curve"), py::arg("s"));
    m.def(
        "lazutkin_step",
        [](const CurveModel& c, double x, double y) {
            const LazutkinPoint p = conjugated_step(c, {x, y});
            return py::make_tuple(p.x, p.y);
        },
        py::arg("curve"), py::arg("x"), py::arg("y"));
    m.def(
        "caustic_drift",
        [](const CurveModel& c, double lambda, double start_angle, int n) {
            return caustic_drift(c, lambda, start_angle, n).max_deviation;
        },
        py::arg("curve"), py::arg("lam"), py::arg("start_angle"), py::arg("steps"));

    m.def(
        "minimize_orbit", [](const CurveModel& c, int q) { return orbit_dict(minimize_orbit(c, q)); }, py::arg("curve"),
        py::arg("q"));
    m.def(
        "beta", [](const CurveModel& c, int q) { return beta_of(c, q); }, py::arg("curve"), py::arg("q"));
    m.def(
        "fit_coeffs_json",
        [](const CurveModel& c, const std::vector<int>& q, const std::vector<int>& powers) {
            py::gil_scoped_release release;
            return fit_coeffs(c, q, powers).to_json().dump();
        },
        py::arg("curve"), py::arg("q"), py::arg("powers") = kDefaultFitPowers);
    m.def(
        "theoretical_coeffs",
        [](const CurveModel& c) {
            const TheoreticalCoeffs t = theoretical_coeffs(c);
            return py::make_tuple(t.b1, t.b3, t.b5);
        },
        py::arg("curve"));
    m.def("isoperimetric_defect", &isoperimetric_defect, py::arg("curve"));
}
