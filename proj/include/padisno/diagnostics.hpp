#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "padisno/problems.hpp"
#include "padisno/solver.hpp"

namespace padisno::diagnostics {

/// Weight of the displacement term in the Lyapunov value
///   E_n = (f+g)(x_n) + delta_n |x_n - x_{n-1}|^2.
///
///   padisno            1/(4s) + L/4 (|b_n| - |b_{n-1}| - 1)
///   padisno, concave   1/(4s) + L/4 (|b_n| - |b_{n-1}|)
///   c-padisno          1/(2s) + L/4 (|b_n| - |b_{n-1}| - 1)
///   c-padisno, concave 1/(2s) + L/4 (|b_n| - |b_{n-1}|)
double delta_n(Variant variant, bool g_concave, double s, double lipschitz, double beta_n, double beta_prev);

struct DescentViolation {
  int n = 0;
  /// E_{n+1} - E_n (positive means the Lyapunov value went up).
  double magnitude = 0.0;
};

struct DescentCertificate {
  std::vector<double> delta_seq;
  std::vector<double> lyapunov_seq;
  /// First index from which E_n is non-increasing (within tolerance) and
  /// delta_n > 0 through the end of the trajectory.
  int burn_in_N = 0;
  /// min over n >= N of (E_n - E_{n+1}) / |x_{n+1} - x_n|^2, skipping zero
  /// displacements; empty when every displacement after N is zero.
  std::optional<double> descent_constant_A;
  std::vector<DescentViolation> violations;

  std::size_t violations_after_burn_in() const;
};

/// Throws ParameterError on an empty trajectory.
DescentCertificate check_descent(const Trajectory& traj, const CompositeObjective& objective,
                                 double tolerance = 1e-10);

/// Relative-error check: |W_n| <= b (D_n + D_{n-1}) with D_n = |x_n - x_{n-1}|
/// and W_n the explicit element of the subdifferential of the regularized
/// function H(x, w) = (f+g)(x) + |w - x|^2 / 2 at (x_n, x_n + d_n (x_n - x_{n-1})),
/// d_n = sqrt(2 delta_n).
struct H2Report {
  std::vector<int> indices;
  std::vector<double> subgradient_norms;
  std::vector<double> ratios;
  double bound_b = 0.0;
  double max_ratio = 0.0;
};

H2Report check_h2(const Trajectory& traj, const CompositeObjective& objective, const InertialSchedule& schedule,
                  int burn_in_N);

struct Summability {
  std::vector<double> partial_sums;
  bool converged = false;
};

/// Running sums of squared displacements. Converged when the trailing
/// increments (last min(10, count) of them) are all below 1e-14.
Summability summability(std::span<const double> displacements);
Summability summability(const Trajectory& traj);

enum class Regime { FiniteSteps, Linear, Sublinear, Inconclusive };

std::string_view to_string(Regime r);

struct RateReport {
  Regime regime = Regime::Inconclusive;
  std::optional<double> fitted_Q;
  std::optional<double> fitted_theta;
  double fit_residual = 0.0;
  double linear_residual = 0.0;
  double sublinear_residual = 0.0;
};

/// Classifies an error sequence e_n (n = first_index, first_index + 1, ...)
/// by comparing least-squares fits of log e_n against n (e_n ~ Q^n) and
/// against log n (e_n ~ n^{-1/(2 theta - 1)}). Residuals are RMS in log space.
/// A terminal run of entries below 1e-15 reports FiniteSteps when it contains
/// an exact zero or leaves fewer than 10 entries to fit; otherwise the run is
/// treated as roundoff and dropped from the fit.
RateReport fit_rate(std::span<const double> errors, int first_index = 1);

}  // namespace padisno::diagnostics
