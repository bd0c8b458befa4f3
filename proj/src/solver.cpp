#include "padisno/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "padisno/errors.hpp"

namespace padisno {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Padisno: return "padisno";
    case Variant::CPadisno: return "c-padisno";
  }
  return "unknown";
}

Variant variant_from_string(std::string_view s) {
  if (s == "padisno" || s == "Padisno" || s == "PADISNO") {
    return Variant::Padisno;
  }
  if (s == "c-padisno" || s == "cpadisno" || s == "CPadisno" || s == "c-PADISNO") {
    return Variant::CPadisno;
  }
  throw ParameterError("unknown variant '" + std::string(s) + "'");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::DisplacementTol: return "displacement_tol";
    case Termination::ObjectiveTol: return "objective_tol";
    case Termination::MaxIters: return "max_iters";
  }
  return "unknown";
}

InertialSchedule InertialSchedule::constant(double alpha, double beta) {
  return InertialSchedule{
      [alpha](int) { return alpha; }, [beta](int) { return beta; }, alpha, beta, std::abs(alpha), std::abs(beta),
  };
}

InertialSchedule InertialSchedule::ramped(double alpha, double beta, double shift) {
  if (!(shift > 0.0)) {
    throw ParameterError("ramped schedule: shift must be positive");
  }
  // |c n / (n + shift)| increases towards |c|, so the limit is also the supremum.
  return InertialSchedule{
      [alpha, shift](int n) { return alpha * n / (n + shift); },
      [beta, shift](int n) { return beta * n / (n + shift); },
      alpha,
      beta,
      std::abs(alpha),
      std::abs(beta),
  };
}

void InertialSchedule::validate(int samples) const {
  if (!alpha || !beta) {
    throw ParameterError("inertial schedule is missing a coefficient map");
  }
  if (!std::isfinite(alpha_limit) || !std::isfinite(beta_limit) || !std::isfinite(alpha_sup) ||
      !std::isfinite(beta_sup)) {
    throw ParameterError("inertial schedule limits and suprema must be finite");
  }
  const double slack = 1e-12;
  auto check = [&](int n) {
    const double a = alpha(n);
    const double b = beta(n);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw ParameterError("inertial coefficient is not finite at n = " + std::to_string(n));
    }
    if (std::abs(a) > alpha_sup + slack || std::abs(b) > beta_sup + slack) {
      throw ParameterError("inertial coefficient exceeds its declared supremum at n = " + std::to_string(n));
    }
  };
  for (int n = 0; n < samples; ++n) {
    check(n);
  }
  for (long n = std::max(samples, 1); n < std::numeric_limits<int>::max() / 2; n *= 4) {
    check(static_cast<int>(n));
  }
}

double max_step_size(Variant variant, bool g_concave, double alpha_limit, double beta_limit, double lipschitz) {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw ParameterError("Lipschitz constant must be positive and finite");
  }
  if (!std::isfinite(beta_limit)) {
    throw ParameterError("beta limit must be finite");
  }
  const double a = std::abs(alpha_limit);
  const double b = std::abs(beta_limit);
  if (variant == Variant::Padisno) {
    if (!(a < 0.5)) {
      throw ParameterError("padisno requires |alpha| < 1/2");
    }
    if (g_concave) {
      return b == 0.0 ? std::numeric_limits<double>::infinity() : (1.0 - 2.0 * a) / (2.0 * lipschitz * b);
    }
    return (1.0 - 2.0 * a) / (lipschitz * (2.0 * b + 1.0));
  }
  if (!(a < 1.0)) {
    throw ParameterError("c-padisno requires |alpha| < 1");
  }
  if (g_concave) {
    return b == 0.0 ? std::numeric_limits<double>::infinity() : (1.0 - a) / (lipschitz * b);
  }
  return 2.0 * (1.0 - a) / (lipschitz * (2.0 * b + 1.0));
}

void validate(const SolverConfig& config, const CompositeObjective& objective) {
  objective.nonsmooth.validate();
  if (!objective.smooth.evaluate || !objective.smooth.gradient) {
    throw ParameterError("smooth part is missing its evaluate or gradient callback");
  }
  if (config.variant == Variant::CPadisno && !objective.nonsmooth.convex) {
    throw ParameterError("c-padisno requires a convex non-smooth term");
  }
  if (!objective.nonsmooth.bounded_below && config.variant == Variant::Padisno) {
    throw ParameterError("padisno requires a non-smooth term bounded below");
  }
  if (!(config.step_size > 0.0) || !std::isfinite(config.step_size)) {
    throw ParameterError("step size must be positive and finite");
  }
  if (config.max_iters < 0) {
    throw ParameterError("max_iters must be nonnegative");
  }
  if (!(config.tol_displacement >= 0.0) || !(config.tol_objective >= 0.0)) {
    throw ParameterError("tolerances must be nonnegative");
  }
  if (config.target_value && !std::isfinite(*config.target_value)) {
    throw ParameterError("target value must be finite");
  }
  config.schedule.validate();
  if (config.allow_unsafe_step) {
    return;
  }
  const double bound = max_step_size(config.variant, config.g_concave, config.schedule.alpha_limit,
                                     config.schedule.beta_limit, objective.smooth.lipschitz);
  if (!(config.step_size < bound)) {
    throw StepSizeError("step size " + std::to_string(config.step_size) + " is not below the admissible bound " +
                        std::to_string(bound) + " (set allow_unsafe_step to override)");
  }
}

StepResult step(const Vector& prev, const Vector& curr, int n, const SolverConfig& config,
                const CompositeObjective& objective) {
  if (prev.size() != curr.size()) {
    throw ParameterError("step: previous and current iterates differ in dimension");
  }
  const double s = config.step_size;
  const Vector diff = curr - prev;
  StepResult out;
  out.y = curr + config.schedule.alpha(n) * diff;
  out.z = curr + config.schedule.beta(n) * diff;
  const Vector grad = objective.smooth.gradient(out.z);
  if (grad.size() != curr.size() || !all_finite(grad)) {
    throw NumericalError("non-finite gradient at iteration " + std::to_string(n));
  }
  out.next = objective.nonsmooth.prox(out.y - s * grad, s);
  if (out.next.size() != curr.size() || !all_finite(out.next)) {
    throw OracleError("prox oracle returned an unusable point at iteration " + std::to_string(n));
  }
  return out;
}

Trajectory run(const Vector& x0, const SolverConfig& config, const CompositeObjective& objective) {
  validate(config, objective);
  if (x0.size() < 1 || !all_finite(x0)) {
    throw ParameterError("initial point must be nonempty and finite");
  }

  Trajectory traj;
  traj.config_snapshot = config;
  traj.records.reserve(static_cast<std::size_t>(std::min(config.max_iters, 1 << 20)) + 1);
  traj.records.push_back(IterateRecord{0, x0, {}, {}, objective.value(x0), 0.0});

  Vector prev = x0;
  Vector curr = x0;
  traj.termination = Termination::MaxIters;
  for (int n = 0; n < config.max_iters; ++n) {
    StepResult st = step(prev, curr, n, config, objective);
    traj.records[static_cast<std::size_t>(n)].y = std::move(st.y);
    traj.records[static_cast<std::size_t>(n)].z = std::move(st.z);

    const double disp = (st.next - curr).norm();
    const double value = objective.value(st.next);
    prev = std::move(curr);
    curr = std::move(st.next);
    traj.records.push_back(IterateRecord{n + 1, curr, {}, {}, value, disp});

    if (disp < config.tol_displacement) {
      traj.termination = Termination::DisplacementTol;
      break;
    }
    if (config.target_value && std::abs(value - *config.target_value) < config.tol_objective) {
      traj.termination = Termination::ObjectiveTol;
      break;
    }
  }

  // The last record gets its extrapolated points as well so that every record
  // carries (x_n, y_n, z_n).
  IterateRecord& last = traj.records.back();
  const Vector diff = curr - prev;
  last.y = curr + config.schedule.alpha(last.n) * diff;
  last.z = curr + config.schedule.beta(last.n) * diff;
  return traj;
}

}  // namespace padisno
