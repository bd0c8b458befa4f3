#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "padisno/problems.hpp"
#include "padisno/types.hpp"

namespace padisno {

/// Padisno accepts a nonconvex (bounded-below) f; CPadisno needs f convex and
/// in exchange allows roughly twice the step size.
enum class Variant { Padisno, CPadisno };

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view s);

/// Inertial coefficients alpha_n (prox anchor y_n) and beta_n (gradient
/// anchor z_n) with their limits and suprema over n.
struct InertialSchedule {
  std::function<double(int)> alpha;
  std::function<double(int)> beta;
  double alpha_limit = 0.0;
  double beta_limit = 0.0;
  double alpha_sup = 0.0;
  double beta_sup = 0.0;

  static InertialSchedule constant(double alpha, double beta);
  /// alpha_n = alpha n / (n + shift), beta_n = beta n / (n + shift).
  static InertialSchedule ramped(double alpha, double beta, double shift = 3.1);

  /// Samples n in [0, samples) plus a geometric tail and checks the suprema.
  void validate(int samples = 10000) const;
};

struct SolverConfig {
  Variant variant = Variant::CPadisno;
  bool g_concave = false;
  double step_size = 0.0;
  InertialSchedule schedule = InertialSchedule::constant(0.0, 0.0);
  int max_iters = 1000;
  double tol_displacement = 1e-12;
  /// Stop once |(f+g)(x_n) - target_value| < tol_objective; only active when
  /// target_value is set.
  double tol_objective = 0.0;
  std::optional<double> target_value;
  /// Skip the inertial-range and step-size gates (e.g. FISTA-like alpha = 1).
  bool allow_unsafe_step = false;
};

/// Strict upper bound on the step size; +infinity only for concave g with beta = 0.
double max_step_size(Variant variant, bool g_concave, double alpha_limit, double beta_limit, double lipschitz);

/// Checks the schedule, inertial limits, step-size gate and oracle/variant
/// compatibility. Throws ParameterError or StepSizeError.
void validate(const SolverConfig& config, const CompositeObjective& objective);

struct StepResult {
  Vector y;
  Vector z;
  Vector next;
};

/// One iteration from (x_{n-1}, x_n):
///   y = x_n + alpha_n (x_n - x_{n-1}),  z = x_n + beta_n (x_n - x_{n-1}),
///   x_{n+1} = prox_{s f}(y - s grad g(z)).
StepResult step(const Vector& prev, const Vector& curr, int n, const SolverConfig& config,
                const CompositeObjective& objective);

struct IterateRecord {
  int n = 0;
  Vector x;
  /// Extrapolated points y_n, z_n computed from x_n and x_{n-1}.
  Vector y;
  Vector z;
  double fg_value = 0.0;
  /// |x_n - x_{n-1}|, zero for record 0 since x_{-1} = x_0.
  double displacement = 0.0;
};

enum class Termination { DisplacementTol, ObjectiveTol, MaxIters };

std::string_view to_string(Termination t);

struct Trajectory {
  std::vector<IterateRecord> records;
  SolverConfig config_snapshot;
  Termination termination = Termination::MaxIters;

  const IterateRecord& back() const { return records.back(); }
  std::size_t size() const { return records.size(); }
};

/// Runs from x_{-1} = x_0 = x0 until a stopping rule fires.
Trajectory run(const Vector& x0, const SolverConfig& config, const CompositeObjective& objective);

}  // namespace padisno
