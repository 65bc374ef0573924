#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffmor/analysis.hpp"
#include "ffmor/bt.hpp"
#include "ffmor/linalg.hpp"
#include "ffmor/model_io.hpp"
#include "ffmor/pfdbt.hpp"

namespace py = pybind11;
using namespace ffmor;

namespace {

StateSpaceModel model_from_parts(const Matrix& A, const Matrix& B, const Matrix& C,
                                 const Matrix& D, const std::string& domain) {
    const TimeDomain dom =
        domain == "discrete" ? TimeDomain::Discrete : TimeDomain::Continuous;
    return make_model(A, B, C, D, dom);
}

Routing parse_routing(const std::string& s) {
    if (s == "r1") return Routing::R1Upper;
    if (s == "r2") return Routing::R2Lower;
    throw Error("unknown routing '" + s + "'");
}

MapFlavor parse_flavor(const std::string& s) {
    if (s == "upper") return MapFlavor::Upper;
    if (s == "lower") return MapFlavor::Lower;
    if (s == "left") return MapFlavor::Left;
    if (s == "right") return MapFlavor::Right;
    throw Error("unknown mapping flavor '" + s + "'");
}

py::dict result_to_dict(const ReductionResult& r) {
    py::dict out;
    out["A"] = r.reduced.A;
    out["B"] = r.reduced.B;
    out["C"] = r.reduced.C;
    out["D"] = r.reduced.D;
    out["time_domain"] =
        r.reduced.time_domain == TimeDomain::Discrete ? "discrete" : "continuous";
    out["bound"] = r.bound;
    out["tail_sv"] = r.tail_sv;
    out["stability_lost"] = r.stability_lost;
    if (r.rho)
        out["rho"] = *r.rho;
    else
        out["rho"] = py::none();
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-frequency model order reduction core";

    py::class_<StateSpaceModel>(m, "Model")
        .def(py::init([](const Matrix& A, const Matrix& B, const Matrix& C,
                         const Matrix& D, const std::string& domain) {
                 return model_from_parts(A, B, C, D, domain);
             }),
             py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"),
             py::arg("time_domain") = "continuous")
        .def_readonly("A", &StateSpaceModel::A)
        .def_readonly("B", &StateSpaceModel::B)
        .def_readonly("C", &StateSpaceModel::C)
        .def_readonly("D", &StateSpaceModel::D)
        .def_property_readonly("order", &StateSpaceModel::order)
        .def_property_readonly("time_domain",
                               [](const StateSpaceModel& s) {
                                   return s.time_domain == TimeDomain::Discrete
                                              ? "discrete"
                                              : "continuous";
                               })
        .def_property_readonly("is_real", [](const StateSpaceModel& s) {
            return s.scalar_field == ScalarField::Real;
        });

    m.def("load_model", [](const std::string& path) { return load_model(path); },
          py::arg("path"));
    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));

    m.def("eval_transfer", &eval_transfer, py::arg("model"), py::arg("point"));

    m.def("hankel_singular_values",
          [](const StateSpaceModel& model) { return balance(model).hankel_sv; },
          py::arg("model"));

    m.def("lyabt",
          [](const StateSpaceModel& model, Eigen::Index r) {
              return result_to_dict(truncate(balance(model), r));
          },
          py::arg("model"), py::arg("order"));
    m.def("spa",
          [](const StateSpaceModel& model, Eigen::Index r) {
              return result_to_dict(spa(balance(model), r));
          },
          py::arg("model"), py::arg("order"));

    m.def("pfdbt",
          [](const StateSpaceModel& model, const std::string& band, double rho,
             Eigen::Index r, const std::string& routing) {
              return result_to_dict(
                  pfdbt(model, parse_band_spec(band), rho, r, parse_routing(routing)));
          },
          py::arg("model"), py::arg("band"), py::arg("rho"), py::arg("order"),
          py::arg("routing") = "r1");

    m.def("sigma_sweep",
          [](const StateSpaceModel& model, const std::string& band, int points) {
              return sigma_sweep(model, parse_band_spec(band), points).points;
          },
          py::arg("model"), py::arg("band"), py::arg("points") = 600);

    m.def("hinf_norm",
          [](const StateSpaceModel& model) {
              HinfResult r = hinf_norm(model);
              return py::make_tuple(r.gamma, r.omega_peak);
          },
          py::arg("model"));

    m.def("band_gain_bound",
          [](const StateSpaceModel& model, const std::string& band, double rho,
             const std::string& flavor) {
              return band_gain_bound(model, parse_band_spec(band), rho,
                                     parse_flavor(flavor));
          },
          py::arg("model"), py::arg("band"), py::arg("rho"),
          py::arg("flavor") = "upper");

    m.def("rho_star",
          [](const StateSpaceModel& model, const std::string& band_spec) {
              FrequencyRange band = parse_band_spec(band_spec);
              return band.variant() == RangeVariant::HF
                         ? rho_star_hf(model.A, band)
                         : rho_star_mf(model.A, band);
          },
          py::arg("model"), py::arg("band"));
    m.def("rho_threshold",
          [](const StateSpaceModel& model, const std::string& band) {
              return rho_threshold(model.A, parse_band_spec(band));
          },
          py::arg("model"), py::arg("band"));

    m.def("min_order_for_tolerance",
          [](const StateSpaceModel& model, const std::string& band, double rho,
             double tol, const std::string& routing) {
              return min_order_for_tolerance(model, parse_band_spec(band), rho,
                                             parse_routing(routing), tol);
          },
          py::arg("model"), py::arg("band"), py::arg("rho"), py::arg("tol"),
          py::arg("routing") = "r1");

    py::register_exception<Error>(m, "FfmorError", PyExc_RuntimeError);
}
