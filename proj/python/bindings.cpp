#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "rhaly/cesaro_op.hpp"
#include "rhaly/criteria.hpp"
#include "rhaly/error.hpp"
#include "rhaly/etagen.hpp"
#include "rhaly/experiment.hpp"
#include "rhaly/normest.hpp"
#include "rhaly/testfuncs.hpp"

namespace py = pybind11;
using rhaly::Complex;
using nlohmann::json;

namespace {

py::array_t<Complex> to_array(std::span<const Complex> values) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

rhaly::PowerIterationOptions power(double tol, int max_iter, std::uint64_t seed) {
  return {tol, max_iter, seed};
}

rhaly::DyadicGrid grid(int min_exp, int max_exp) { return {min_exp, max_exp}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized Cesaro operators on weighted Dirichlet spaces";

  py::register_exception<rhaly::NonMonotoneError>(m, "NonMonotoneError", PyExc_ValueError);
  py::register_exception<rhaly::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<rhaly::NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("weight", &rhaly::weight, py::arg("n"), py::arg("alpha"));
  m.def(
      "norm_sq",
      [](std::vector<Complex> coeffs, double alpha) {
        return rhaly::norm_sq(rhaly::CoeffSeq(std::move(coeffs)), alpha);
      },
      py::arg("coeffs"), py::arg("alpha"));

  py::class_<rhaly::EtaSeq>(m, "EtaSeq")
      .def_property_readonly("values", [](const rhaly::EtaSeq& e) { return to_array(e.values()); })
      .def_property_readonly("provenance", &rhaly::EtaSeq::provenance)
      .def_property_readonly("max_index", &rhaly::EtaSeq::max_index)
      .def("__len__", &rhaly::EtaSeq::size)
      .def("truncated", &rhaly::EtaSeq::truncated, py::arg("length"));

  m.def("classical_cesaro", &rhaly::classical_cesaro, py::arg("max_index"));
  m.def("power_log_family", &rhaly::power_log_family, py::arg("s"), py::arg("r"),
        py::arg("max_index"));
  m.def("explicit_eta", &rhaly::explicit_eta, py::arg("values"));
  m.def(
      "_measure_moments",
      [](const std::string& measure, std::size_t max_index) {
        return rhaly::measure_moments(rhaly::measure_from_json(json::parse(measure)), max_index);
      },
      py::arg("measure_json"), py::arg("max_index"));

  m.def(
      "apply",
      [](const rhaly::EtaSeq& eta, std::vector<Complex> f) {
        return to_array(rhaly::apply(eta, rhaly::CoeffSeq(std::move(f))).coeffs());
      },
      py::arg("eta"), py::arg("f"));

  m.def(
      "section_norm",
      [](const rhaly::EtaSeq& eta, double alpha, double beta, std::size_t n, double tol,
         int max_iter, std::uint64_t seed) {
        const auto est = rhaly::section_norm(rhaly::section(eta, alpha, beta, n),
                                             power(tol, max_iter, seed));
        return py::make_tuple(est.value, est.iterations, est.residual, est.converged);
      },
      py::arg("eta"), py::arg("alpha"), py::arg("beta"), py::arg("n"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 100000, py::arg("seed") = 42);
  m.def(
      "dense_section_norm",
      [](const rhaly::EtaSeq& eta, double alpha, double beta, std::size_t n) {
        return rhaly::dense_svd_norm(rhaly::section(eta, alpha, beta, n).to_dense());
      },
      py::arg("eta"), py::arg("alpha"), py::arg("beta"), py::arg("n"));
  m.def(
      "residual_norm",
      [](const rhaly::EtaSeq& eta, double alpha, double beta, std::size_t n_cut,
         std::size_t n_big, double tol, int max_iter, std::uint64_t seed) {
        const auto est = rhaly::residual_norm(eta, alpha, beta, n_cut, n_big,
                                              power(tol, max_iter, seed));
        return py::make_tuple(est.value, est.iterations, est.residual, est.converged);
      },
      py::arg("eta"), py::arg("alpha"), py::arg("beta"), py::arg("n_cut"), py::arg("n_big"),
      py::arg("tol") = 1e-10, py::arg("max_iter") = 100000, py::arg("seed") = 42);

  // Reports cross the boundary as JSON text; the package wrapper decodes them.
  m.def(
      "_criterion",
      [](const rhaly::EtaSeq& eta, double alpha, double beta, int min_exp, int max_exp,
         const std::string& form) {
        rhaly::CriterionReport r;
        if (form == "partial_sum") {
          r = rhaly::partial_sum_form(eta, alpha, beta, grid(min_exp, max_exp));
        } else if (form == "shortcut") {
          r = rhaly::decreasing_shortcut(eta, alpha, beta, grid(min_exp, max_exp));
        } else if (form == "tail") {
          r = rhaly::criterion(eta, alpha, beta, grid(min_exp, max_exp));
        } else {
          throw rhaly::InvalidArgument("unknown criterion form: " + form);
        }
        return rhaly::to_json(r).dump();
      },
      py::arg("eta"), py::arg("alpha"), py::arg("beta"), py::arg("min_exp"),
      py::arg("max_exp"), py::arg("form"));
  m.def(
      "_carleson",
      [](const std::string& measure, double s, int levels) {
        const auto t = rhaly::dyadic_t_grid(levels);
        return rhaly::to_json(
                   rhaly::carleson_statistic(rhaly::measure_from_json(json::parse(measure)), s, t))
            .dump();
      },
      py::arg("measure_json"), py::arg("s"), py::arg("levels"));
  m.def(
      "_lower_bound",
      [](const rhaly::EtaSeq& eta, double alpha, double beta, std::vector<Complex> f) {
        return rhaly::to_json(rhaly::lower_bound(eta, alpha, beta, rhaly::CoeffSeq(std::move(f))))
            .dump();
      },
      py::arg("eta"), py::arg("alpha"), py::arg("beta"), py::arg("f"));
  m.def(
      "_schur_log_kernel",
      [](std::size_t n) {
        return rhaly::to_json(
                   rhaly::schur_certify(rhaly::log_kernel, rhaly::log_kernel_weights(n), n))
            .dump();
      },
      py::arg("n"));
  m.def(
      "_bennett_uvw",
      [](const rhaly::EtaSeq& eta, double alpha, double beta, std::vector<double> abs_a,
         int min_exp, int max_exp) {
        return rhaly::to_json(rhaly::bennett_uvw(eta, alpha, beta, abs_a, grid(min_exp, max_exp)))
            .dump();
      },
      py::arg("eta"), py::arg("alpha"), py::arg("beta"), py::arg("abs_a"), py::arg("min_exp"),
      py::arg("max_exp"));
  m.def(
      "h_b",
      [](double b, std::size_t n) { return to_array(rhaly::h_b(b, n).coeffs()); },
      py::arg("b"), py::arg("n"));
  m.def(
      "g_b_alpha",
      [](double b, double alpha, std::size_t n) {
        return to_array(rhaly::g_b_alpha(b, alpha, n).coeffs());
      },
      py::arg("b"), py::arg("alpha"), py::arg("n"));

  m.def(
      "_run",
      [](const std::string& config) {
        rhaly::experiment::RunResult r;
        {
          py::gil_scoped_release release;
          r = rhaly::experiment::run(rhaly::experiment::config_from_json(json::parse(config)));
        }
        return py::make_tuple(r.exit_code, r.summary.dump(), r.tables);
      },
      py::arg("config_json"));
  m.def(
      "_sweep",
      [](const std::string& configs, const std::string& out_dir, int jobs) {
        rhaly::experiment::SweepResult r;
        {
          py::gil_scoped_release release;
          r = rhaly::experiment::sweep(
              rhaly::experiment::sweep_configs_from_json(json::parse(configs)), out_dir, jobs);
        }
        return py::make_tuple(r.exit_code, r.table_csv, r.error);
      },
      py::arg("configs_json"), py::arg("out_dir"), py::arg("jobs"));
}
