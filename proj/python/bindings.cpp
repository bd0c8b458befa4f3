#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "padisno/diagnostics.hpp"
#include "padisno/errors.hpp"
#include "padisno/experiments.hpp"

namespace py = pybind11;
using namespace padisno;
namespace ex = padisno::experiments;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

imaging::Image to_image(const RowMatrix& m) {
  return imaging::Image(static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                        Eigen::Map<const Vector>(m.data(), m.size()));
}

RowMatrix to_matrix(const imaging::Image& img) {
  return Eigen::Map<const RowMatrix>(img.pixels.data(), img.rows, img.cols);
}

imaging::Pattern pattern_from_string(const std::string& s) {
  if (s == "checkerboard") return imaging::Pattern::Checkerboard;
  if (s == "gradient") return imaging::Pattern::Gradient;
  if (s == "disk") return imaging::Pattern::Disk;
  if (s == "composite") return imaging::Pattern::Composite;
  throw ParameterError("unknown pattern '" + s + "'");
}

py::dict trajectory_dict(const Trajectory& t, const diagnostics::DescentCertificate& cert) {
  const std::size_t count = t.size();
  const Eigen::Index dim = t.records.front().x.size();
  RowMatrix x(static_cast<Eigen::Index>(count), dim);
  Vector fg(static_cast<Eigen::Index>(count));
  Vector disp(static_cast<Eigen::Index>(count));
  for (std::size_t n = 0; n < count; ++n) {
    x.row(static_cast<Eigen::Index>(n)) = t.records[n].x.transpose();
    fg[static_cast<Eigen::Index>(n)] = t.records[n].fg_value;
    disp[static_cast<Eigen::Index>(n)] = t.records[n].displacement;
  }
  py::dict d;
  d["x"] = x;
  d["fg_value"] = fg;
  d["displacement"] = disp;
  d["delta_n"] = Vector(Eigen::Map<const Vector>(cert.delta_seq.data(), static_cast<Eigen::Index>(count)));
  d["lyapunov"] = Vector(Eigen::Map<const Vector>(cert.lyapunov_seq.data(), static_cast<Eigen::Index>(count)));
  d["termination"] = std::string(to_string(t.termination));
  d["step_size"] = t.config_snapshot.step_size;
  d["burn_in"] = cert.burn_in_N;
  d["descent_constant"] = cert.descent_constant_A;
  d["violations"] = cert.violations.size();
  return d;
}

py::dict rate_dict(const diagnostics::RateReport& r) {
  py::dict d;
  d["regime"] = std::string(diagnostics::to_string(r.regime));
  d["fitted_Q"] = r.fitted_Q;
  d["fitted_theta"] = r.fitted_theta;
  d["fit_residual"] = r.fit_residual;
  d["linear_residual"] = r.linear_residual;
  d["sublinear_residual"] = r.sublinear_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Inertial forward-backward solvers, diagnostics and imaging helpers";

  auto& parameter_error = py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<StepSizeError>(m, "StepSizeError", parameter_error.ptr());
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<OracleError>(m, "OracleError", PyExc_RuntimeError);

  m.def(
      "max_step_size",
      [](const std::string& variant, double alpha, double beta, double lipschitz, bool g_concave) {
        return max_step_size(variant_from_string(variant), g_concave, alpha, beta, lipschitz);
      },
      py::arg("variant"), py::arg("alpha"), py::arg("beta"), py::arg("lipschitz"), py::arg("g_concave") = false);

  m.def("prox_l0_scalar", &prox_l0_scalar, py::arg("t"), py::arg("gamma_lambda"));
  m.def("prox_l0", &prox_l0_vector, py::arg("x"), py::arg("gamma_lambda"));
  m.def("prox_l1", &prox_l1, py::arg("x"), py::arg("gamma_lambda"));
  m.def("prox_norm_cubed", &prox_norm_cubed, py::arg("x"), py::arg("lam"));
  m.def(
      "prox_wavelet_l0",
      [](const RowMatrix& img, double gamma_lambda, int levels) {
        const imaging::HaarTransform W(static_cast<int>(img.rows()), static_cast<int>(img.cols()), levels);
        const Vector out = prox_wavelet_l0(Eigen::Map<const Vector>(img.data(), img.size()), gamma_lambda, W);
        return RowMatrix(Eigen::Map<const RowMatrix>(out.data(), img.rows(), img.cols()));
      },
      py::arg("image"), py::arg("gamma_lambda"), py::arg("levels") = 4);

  m.def(
      "haar_analyze",
      [](const RowMatrix& img, int levels) {
        const imaging::HaarTransform W(static_cast<int>(img.rows()), static_cast<int>(img.cols()), levels);
        const Vector c = W.analyze(Eigen::Map<const Vector>(img.data(), img.size()));
        return RowMatrix(Eigen::Map<const RowMatrix>(c.data(), img.rows(), img.cols()));
      },
      py::arg("image"), py::arg("levels") = 4);
  m.def(
      "haar_synthesize",
      [](const RowMatrix& coeffs, int levels) {
        const imaging::HaarTransform W(static_cast<int>(coeffs.rows()), static_cast<int>(coeffs.cols()), levels);
        const Vector x = W.synthesize(Eigen::Map<const Vector>(coeffs.data(), coeffs.size()));
        return RowMatrix(Eigen::Map<const RowMatrix>(x.data(), coeffs.rows(), coeffs.cols()));
      },
      py::arg("coeffs"), py::arg("levels") = 4);

  m.def("gaussian_kernel", &imaging::gaussian_kernel, py::arg("size") = 9, py::arg("sigma") = 4.0);
  m.def(
      "blur",
      [](const RowMatrix& img, bool adjoint) {
        const auto A = imaging::BlurOperator::gaussian(static_cast<int>(img.rows()), static_cast<int>(img.cols()));
        const imaging::Image in = to_image(img);
        return to_matrix(adjoint ? A.adjoint(in) : A.apply(in));
      },
      py::arg("image"), py::arg("adjoint") = false);
  m.def(
      "isnr",
      [](const RowMatrix& original, const RowMatrix& observed, const RowMatrix& estimate) {
        return imaging::isnr(to_image(original), to_image(observed), to_image(estimate));
      },
      py::arg("original"), py::arg("observed"), py::arg("estimate"));
  m.def(
      "synthetic_image", [](const std::string& pattern, int size) {
        return to_matrix(imaging::synthetic_image(pattern_from_string(pattern), size));
      },
      py::arg("pattern") = "composite", py::arg("size") = 64);

  m.def(
      "solve",
      [](const std::string& problem, double alpha, double beta, std::optional<std::string> variant,
         std::optional<double> step, bool allow_unsafe_step, std::optional<int> max_iters, double tol,
         std::uint64_t seed) {
        ex::ExperimentConfig c;
        c.problem = ex::problem_from_string(problem);
        if (variant) c.variant = variant_from_string(*variant);
        c.alpha = alpha;
        c.beta = beta;
        c.step_override = step;
        c.allow_unsafe_step = allow_unsafe_step;
        c.max_iters = max_iters;
        c.tol = tol;
        c.seed = seed;
        const ex::SolverSetup s = ex::make_setup(c);
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = run(s.x0, s.config, s.objective);
        }
        py::dict d = trajectory_dict(t, diagnostics::check_descent(t, s.objective));
        if (s.objective.known_minimum) d["minimum_value"] = s.objective.known_minimum->value;
        return d;
      },
      py::arg("problem") = "toy2d", py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("variant") = py::none(),
      py::arg("step") = py::none(), py::arg("allow_unsafe_step") = false, py::arg("max_iters") = py::none(),
      py::arg("tol") = 1e-12, py::arg("seed") = 0);

  m.def(
      "fig1_cell",
      [](double alpha, double beta, std::optional<double> step, bool allow_unsafe_step, double tol, int max_iters) {
        const ex::Fig1Cell cell =
            ex::run_fig1_cell(alpha, beta, step.value_or(ex::toy_step(alpha, beta)), allow_unsafe_step, tol, max_iters);
        py::dict d = trajectory_dict(cell.trajectory, cell.certificate);
        d["iters_to_tol"] = cell.iters_to_tol;
        d["final_error"] = cell.final_error;
        d["stayed_in_D"] = cell.stayed_in_D;
        return d;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("step") = py::none(), py::arg("allow_unsafe_step") = false,
      py::arg("tol") = 1e-12, py::arg("max_iters") = 50000);

  m.def(
      "fit_rate",
      [](const std::vector<double>& errors, int first_index) { return rate_dict(diagnostics::fit_rate(errors, first_index)); },
      py::arg("errors"), py::arg("first_index") = 1);

  m.def(
      "restore",
      [](std::optional<RowMatrix> image, double alpha, double beta, int iterations, std::uint64_t seed,
         double salt_pepper, double gaussian_sigma, bool blur, double lam, std::optional<double> step) {
        const imaging::Image original =
            image ? to_image(*image) : imaging::synthetic_image(imaging::Pattern::Composite, 64);
        ex::RestoreOptions o;
        o.alpha = alpha;
        o.beta = beta;
        o.iterations = iterations;
        o.seed = seed;
        o.salt_pepper_density = salt_pepper;
        o.gaussian_sigma = gaussian_sigma;
        o.blur = blur;
        o.lambda = lam;
        o.step_override = step;
        ex::RestoreResult r;
        {
          py::gil_scoped_release release;
          r = ex::run_restore(original, o);
        }
        py::dict d;
        d["original"] = to_matrix(r.original);
        d["observed"] = to_matrix(r.observed);
        d["estimate"] = to_matrix(r.estimate);
        d["isnr"] = r.isnr;
        d["step_size"] = r.step;
        return d;
      },
      py::arg("image") = py::none(), py::arg("alpha") = 0.0, py::arg("beta") = 0.0,
      py::arg("iterations") = ex::kRestoreIters, py::arg("seed") = 0, py::arg("salt_pepper") = ex::kRestoreSaltPepper,
      py::arg("gaussian_sigma") = ex::kRestoreGaussianSigma, py::arg("blur") = true, py::arg("lam") = ex::kRestoreLambda,
      py::arg("step") = py::none());
}
