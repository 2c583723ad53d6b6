#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "excursion/asymptotics.hpp"
#include "excursion/error.hpp"
#include "excursion/fieldsim.hpp"
#include "excursion/pickands.hpp"
#include "excursion/quad.hpp"

namespace py = pybind11;
using namespace excursion;

namespace {

quad::IntegralSpec spec(double gamma, double beta, double a, double delta, double u, double c1,
                        double c2) {
  return {gamma, beta, a, delta, u, c1, c2};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = EXCURSION_VERSION;

  static py::exception<ConvergenceError> convergence(m, "ConvergenceError", PyExc_RuntimeError);
  static py::exception<FactorizationError> factorization(m, "FactorizationError",
                                                         PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConvergenceError& e) {
      py::object err = py::handle(convergence.ptr())(e.what());
      err.attr("best_estimate") = e.best_estimate();
      err.attr("error_bound") = e.error_bound();
      PyErr_SetObject(convergence.ptr(), err.ptr());
    } catch (const FactorizationError& e) {
      py::object err = py::handle(factorization.ptr())(e.what());
      err.attr("min_eigenvalue") = e.min_eigenvalue_estimate();
      PyErr_SetObject(factorization.ptr(), err.ptr());
    }
  });

  py::enum_<Regime>(m, "Regime")
      .value("SideDominated", Regime::SideDominated)
      .value("LogProduct", Regime::LogProduct)
      .value("CriticalProduct", Regime::CriticalProduct)
      .value("Classical", Regime::Classical);

  py::class_<Point2>(m, "Point2")
      .def(py::init<double, double>(), py::arg("t1"), py::arg("t2"))
      .def_readwrite("t1", &Point2::t1)
      .def_readwrite("t2", &Point2::t2);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double, double, double, double>(), py::arg("alpha"),
           py::arg("beta"), py::arg("a"), py::arg("T") = 1.0, py::arg("c1") = 0.0,
           py::arg("c2") = 0.0)
      .def_property_readonly("alpha", &ModelParams::alpha)
      .def_property_readonly("beta", &ModelParams::beta)
      .def_property_readonly("a", &ModelParams::a)
      .def_property_readonly("T", &ModelParams::T)
      .def_property_readonly("c1", &ModelParams::c1)
      .def_property_readonly("c2", &ModelParams::c2)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(alpha=" + std::to_string(p.alpha()) + ", beta=" +
               std::to_string(p.beta()) + ", a=" + std::to_string(p.a()) + ")";
      });

  m.def("variance_loss", [](const ModelParams& p, double t1, double t2) {
    return model::variance_loss(p, {t1, t2});
  }, py::arg("params"), py::arg("t1"), py::arg("t2"));
  m.def("sigma", [](const ModelParams& p, double t1, double t2) {
    return model::sigma(p, {t1, t2});
  }, py::arg("params"), py::arg("t1"), py::arg("t2"));
  m.def("regime_threshold", &model::regime_threshold, py::arg("alpha"), py::arg("beta"));
  m.def("classify_regime", py::overload_cast<const ModelParams&>(&model::classify_regime));

  m.def("normal_survival", &quad::normal_survival, py::arg("u"));
  m.def("g_beta", &quad::g_beta, py::arg("beta"));
  m.def("k_beta", [](double b) { return quad::k_beta(b); }, py::arg("beta"));
  m.def("trend_l", [](double c) { return quad::trend_l(c); }, py::arg("c"));
  m.def("trend_k", [](double c1, double c2) { return quad::trend_k(c1, c2); }, py::arg("c1"),
        py::arg("c2"));

  py::class_<AsymptoticPrediction>(m, "AsymptoticPrediction")
      .def_readonly("prefactor", &AsymptoticPrediction::prefactor)
      .def_readonly("u_power", &AsymptoticPrediction::u_power)
      .def_readonly("log_power", &AsymptoticPrediction::log_power)
      .def_readonly("uses_psi", &AsymptoticPrediction::uses_psi)
      .def("evaluate", &AsymptoticPrediction::evaluate, py::arg("u"))
      .def("__call__", &AsymptoticPrediction::evaluate, py::arg("u"));

  m.def("i_gamma",
        [](double u, double a, double gamma, double beta, double delta) {
          return quad::i_gamma(spec(gamma, beta, a, delta, u, 0, 0));
        },
        py::arg("u"), py::arg("a"), py::arg("gamma") = 1.0, py::arg("beta") = 2.0,
        py::arg("delta") = 1.0);
  m.def("i_gamma_asymptote",
        [](double a, double gamma, double beta) {
          return quad::i_gamma_asymptote(spec(gamma, beta, a, 1.0, 1.0, 0, 0));
        },
        py::arg("a"), py::arg("gamma") = 1.0, py::arg("beta") = 2.0);
  m.def("i_trend",
        [](double u, double a, double c1, double c2, double delta) {
          return quad::i_trend(spec(1.0, 2.0, a, delta, u, c1, c2));
        },
        py::arg("u"), py::arg("a"), py::arg("c1"), py::arg("c2"), py::arg("delta") = 1.0);
  m.def("inner_a", [](double z, double c1, double c2) { return quad::inner_a(z, c1, c2); },
        py::arg("z"), py::arg("c1") = 0.0, py::arg("c2") = 0.0);
  m.def("j_lambda_ratio",
        [](double lambda, double p, double q, double gamma) {
          return quad::j_lambda_ratio(lambda, p, q, gamma);
        },
        py::arg("lam"), py::arg("p"), py::arg("q"), py::arg("gamma") = 1.0);

  m.def("known_pickands_constant", &asymptotics::known_pickands_constant, py::arg("alpha"));
  m.def("predict", [](const ModelParams& p, double h) { return asymptotics::predict(p, h); },
        py::arg("params"), py::arg("h_alpha"));
  m.def("predict_trend",
        [](const ModelParams& p, double h) { return asymptotics::predict_trend(p, h); },
        py::arg("params"), py::arg("h_alpha"));

  py::class_<asymptotics::SweepRow>(m, "SweepRow")
      .def_readonly("a", &asymptotics::SweepRow::a)
      .def_readonly("regime", &asymptotics::SweepRow::regime)
      .def_readonly("u_power", &asymptotics::SweepRow::u_power)
      .def_readonly("log_power", &asymptotics::SweepRow::log_power)
      .def_readonly("prefactor", &asymptotics::SweepRow::prefactor)
      .def_readonly("value", &asymptotics::SweepRow::value);
  m.def("regime_sweep",
        [](double alpha, double beta, const std::vector<double>& a, double u, double h) {
          return asymptotics::regime_sweep(alpha, beta, a, u, h);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("a_values"), py::arg("u"),
        py::arg("h_alpha") = 1.0);

  py::class_<pickands::PickandsEstimate>(m, "PickandsEstimate")
      .def_readonly("value", &pickands::PickandsEstimate::value)
      .def_readonly("std_err", &pickands::PickandsEstimate::std_err)
      .def_readonly("n_replicates", &pickands::PickandsEstimate::n_replicates)
      .def_readonly("horizon", &pickands::PickandsEstimate::horizon)
      .def_readonly("n_points", &pickands::PickandsEstimate::n_points);
  py::class_<pickands::PickandsConstantEstimate>(m, "PickandsConstantEstimate")
      .def_readonly("slope", &pickands::PickandsConstantEstimate::slope)
      .def_readonly("naive", &pickands::PickandsConstantEstimate::naive)
      .def_readonly("rungs", &pickands::PickandsConstantEstimate::rungs)
      .def_readonly("joint_std_err", &pickands::PickandsConstantEstimate::joint_std_err)
      .def_readonly("disagreement", &pickands::PickandsConstantEstimate::disagreement)
      .def_readonly("warning", &pickands::PickandsConstantEstimate::warning);
  m.def("pickands_finite",
        [](double alpha, double horizon, std::size_t n_points, std::size_t n_rep,
           std::uint64_t seed, unsigned workers) {
          py::gil_scoped_release release;
          return pickands::pickands_finite(alpha, horizon, n_points, n_rep, seed, {workers});
        },
        py::arg("alpha"), py::arg("horizon"), py::arg("n_points"), py::arg("n_replicates"),
        py::arg("seed") = 20240611, py::arg("workers") = 1);
  m.def("pickands_constant",
        [](double alpha, std::vector<double> ladder, double max_spacing_power,
           std::size_t n_rep, std::uint64_t seed, unsigned workers) {
          py::gil_scoped_release release;
          return pickands::pickands_constant(
              alpha, {std::move(ladder), max_spacing_power, n_rep, seed, {workers}});
        },
        py::arg("alpha"), py::arg("s_ladder") = std::vector<double>{1.0, 2.0, 4.0},
        py::arg("max_spacing_power") = 0.05, py::arg("n_replicates") = 1000000,
        py::arg("seed") = 20240611, py::arg("workers") = 1);

  py::class_<fieldsim::GridField>(m, "GridField")
      .def_property_readonly("n1", &fieldsim::GridField::n1)
      .def_property_readonly("n2", &fieldsim::GridField::n2)
      .def_property_readonly("axis1", &fieldsim::GridField::axis1)
      .def_property_readonly("axis2", &fieldsim::GridField::axis2)
      .def("covariance_matrix", &fieldsim::GridField::covariance_matrix)
      .def("sample", [](const fieldsim::GridField& g, std::uint64_t seed, std::uint64_t index) {
        Engine e = replicate_engine(seed, index);
        return g.sample(e);
      }, py::arg("seed"), py::arg("index") = 0);
  m.def("build_grid",
        [](const ModelParams& p, std::size_t n) { return fieldsim::build_grid(p, n); },
        py::arg("params"), py::arg("n_per_axis"));
  m.def("build_strip_grid",
        [](const ModelParams& p, double w, std::size_t n1, std::size_t n2) {
          return fieldsim::build_strip_grid(p, w, n1, n2);
        },
        py::arg("params"), py::arg("width"), py::arg("n1"), py::arg("n2"));

  py::class_<fieldsim::MCEstimate>(m, "MCEstimate")
      .def_readonly("p_hat", &fieldsim::MCEstimate::p_hat)
      .def_readonly("std_err", &fieldsim::MCEstimate::std_err)
      .def_readonly("n_samples", &fieldsim::MCEstimate::n_samples)
      .def_readonly("level_u", &fieldsim::MCEstimate::level_u);
  m.def("mc_excursion",
        [](const fieldsim::GridField& g, double u, double c1, double c2, std::size_t n,
           std::uint64_t seed, unsigned workers) {
          py::gil_scoped_release release;
          return fieldsim::mc_excursion(g, u, {c1, c2}, n, seed, workers);
        },
        py::arg("grid"), py::arg("u"), py::arg("c1") = 0.0, py::arg("c2") = 0.0,
        py::arg("n_samples") = 100000, py::arg("seed") = 20240611, py::arg("workers") = 1);
}
