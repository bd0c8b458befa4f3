#include "padisno/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "padisno/errors.hpp"

namespace padisno::diagnostics {

double delta_n(Variant variant, bool g_concave, double s, double lipschitz, double beta_n, double beta_prev) {
  if (!(s > 0.0) || !(lipschitz > 0.0)) {
    throw ParameterError("delta_n: step size and Lipschitz constant must be positive");
  }
  const double base = variant == Variant::Padisno ? 1.0 / (4.0 * s) : 1.0 / (2.0 * s);
  const double shift = g_concave ? 0.0 : 1.0;
  return base + lipschitz / 4.0 * (std::abs(beta_n) - std::abs(beta_prev) - shift);
}

std::size_t DescentCertificate::violations_after_burn_in() const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [this](const DescentViolation& v) { return v.n >= burn_in_N; }));
}

namespace {

std::vector<double> delta_sequence(const Trajectory& traj, double lipschitz) {
  const SolverConfig& cfg = traj.config_snapshot;
  std::vector<double> out;
  out.reserve(traj.size());
  for (const IterateRecord& r : traj.records) {
    const int n = r.n;
    out.push_back(delta_n(cfg.variant, cfg.g_concave, cfg.step_size, lipschitz, cfg.schedule.beta(n),
                          cfg.schedule.beta(std::max(n - 1, 0))));
  }
  return out;
}

}  // namespace

DescentCertificate check_descent(const Trajectory& traj, const CompositeObjective& objective, double tolerance) {
  if (traj.records.empty()) {
    throw ParameterError("check_descent: empty trajectory");
  }
  DescentCertificate cert;
  cert.delta_seq = delta_sequence(traj, objective.smooth.lipschitz);
  const std::size_t count = traj.size();
  cert.lyapunov_seq.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    const IterateRecord& r = traj.records[n];
    cert.lyapunov_seq[n] = r.fg_value + cert.delta_seq[n] * r.displacement * r.displacement;
  }

  const auto& E = cert.lyapunov_seq;
  for (std::size_t n = 0; n + 1 < count; ++n) {
    const double increase = E[n + 1] - E[n];
    if (increase > tolerance) {
      cert.violations.push_back({static_cast<int>(n), increase});
    }
  }

  // delta_0 multiplies a zero displacement, so positivity is required from n = 1.
  auto positive = [&](std::size_t n) { return n == 0 || cert.delta_seq[n] > 0.0; };
  std::size_t burn_in = count - 1;
  if (positive(burn_in)) {
    while (burn_in > 0 && positive(burn_in - 1) && E[burn_in] <= E[burn_in - 1] + tolerance) {
      --burn_in;
    }
  }
  cert.burn_in_N = static_cast<int>(burn_in);

  for (std::size_t n = burn_in; n + 1 < count; ++n) {
    const double d = traj.records[n + 1].displacement;
    if (d == 0.0) {
      continue;
    }
    const double ratio = (E[n] - E[n + 1]) / (d * d);
    cert.descent_constant_A = cert.descent_constant_A ? std::min(*cert.descent_constant_A, ratio) : ratio;
  }
  return cert;
}

H2Report check_h2(const Trajectory& traj, const CompositeObjective& objective, const InertialSchedule& schedule,
                  int burn_in_N) {
  const SolverConfig& cfg = traj.config_snapshot;
  const double s = cfg.step_size;
  const double L = objective.smooth.lipschitz;
  if (burn_in_N < 0) {
    throw ParameterError("check_h2: burn-in index must be nonnegative");
  }
  const int last = static_cast<int>(traj.size()) - 1;

  H2Report report;
  double delta_sup = 0.0;
  for (int m = burn_in_N + 2; m <= last; ++m) {
    const IterateRecord& prev2 = traj.records[static_cast<std::size_t>(m - 2)];
    const IterateRecord& prev = traj.records[static_cast<std::size_t>(m - 1)];
    const IterateRecord& cur = traj.records[static_cast<std::size_t>(m)];
    if (prev.y.size() != cur.x.size() || prev.z.size() != cur.x.size()) {
      throw ParameterError("check_h2: record " + std::to_string(m - 1) + " lacks its extrapolated points");
    }
    const double delta = delta_n(cfg.variant, cfg.g_concave, s, L, schedule.beta(m), schedule.beta(m - 1));
    if (!(delta > 0.0)) {
      continue;
    }
    delta_sup = std::max(delta_sup, delta);
    const double dtilde = std::sqrt(2.0 * delta);
    const Vector step_now = cur.x - prev.x;
    const Vector first = (prev.y - cur.x) / s - objective.smooth.gradient(prev.z) +
                         objective.smooth.gradient(cur.x) - dtilde * step_now;
    const double w = std::sqrt(first.squaredNorm() + dtilde * dtilde * step_now.squaredNorm());
    report.indices.push_back(m);
    report.subgradient_norms.push_back(w);

    const double denom = step_now.norm() + (prev.x - prev2.x).norm();
    if (denom > 0.0) {
      const double ratio = w / denom;
      report.ratios.push_back(ratio);
      report.max_ratio = std::max(report.max_ratio, ratio);
    }
  }

  // Suprema over n of the n-indexed quantities inside the max.
  const double a = schedule.alpha_sup;
  const double b = schedule.beta_sup;
  const double first_branch = 4.0 / (s * s) + 4.0 * L * L + 4.0 * (2.0 * delta_sup);
  const double second_branch = 4.0 * a * a / (s * s) + 4.0 * L * L * b * b;
  report.bound_b = std::sqrt(std::max(first_branch, second_branch));
  return report;
}

Summability summability(std::span<const double> displacements) {
  Summability out;
  out.partial_sums.reserve(displacements.size());
  double sum = 0.0;
  for (double d : displacements) {
    sum += d * d;
    out.partial_sums.push_back(sum);
  }
  if (displacements.empty()) {
    return out;
  }
  const std::size_t window = std::min<std::size_t>(10, displacements.size());
  out.converged = std::all_of(displacements.end() - static_cast<std::ptrdiff_t>(window), displacements.end(),
                              [](double d) { return d * d < 1e-14; });
  return out;
}

Summability summability(const Trajectory& traj) {
  std::vector<double> d;
  d.reserve(traj.size());
  for (std::size_t n = 1; n < traj.size(); ++n) {
    d.push_back(traj.records[n].displacement);
  }
  return summability(d);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::FiniteSteps: return "FiniteSteps";
    case Regime::Linear: return "Linear";
    case Regime::Sublinear: return "Sublinear";
    case Regime::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

constexpr double kFiniteFloor = 1e-15;
constexpr double kInconclusiveBand = 0.10;

}  // namespace

RateReport fit_rate(std::span<const double> errors, int first_index) {
  if (errors.size() < 10) {
    throw ParameterError("fit_rate needs at least 10 error values");
  }
  if (first_index < 1) {
    throw ParameterError("fit_rate: first index must be at least 1");
  }
  for (double e : errors) {
    if (!std::isfinite(e) || e < 0.0) {
      throw ParameterError("fit_rate: errors must be finite and nonnegative");
    }
  }

  // A terminal run below the floor is finite termination when it reaches an
  // exact zero; otherwise it is roundoff and is trimmed before fitting.
  std::size_t count = errors.size();
  while (count > 0 && errors[count - 1] < kFiniteFloor) {
    --count;
  }
  if (count < errors.size()) {
    const bool exact_zero = std::any_of(errors.begin() + static_cast<std::ptrdiff_t>(count), errors.end(),
                                        [](double e) { return e == 0.0; });
    if (exact_zero || count < 10) {
      RateReport report;
      report.regime = Regime::FiniteSteps;
      return report;
    }
  }
  if (std::any_of(errors.begin(), errors.begin() + static_cast<std::ptrdiff_t>(count),
                  [](double e) { return e <= 0.0; })) {
    throw ParameterError("fit_rate: zero error followed by positive errors");
  }

  std::vector<double> n(count);
  std::vector<double> log_n(count);
  std::vector<double> log_e(count);
  for (std::size_t i = 0; i < count; ++i) {
    n[i] = static_cast<double>(first_index) + static_cast<double>(i);
    log_n[i] = std::log(n[i]);
    log_e[i] = std::log(errors[i]);
  }
  const LineFit lin = least_squares(n, log_e);
  const LineFit sub = least_squares(log_n, log_e);

  RateReport report;
  report.linear_residual = lin.rms;
  report.sublinear_residual = sub.rms;
  report.fit_residual = std::min(lin.rms, sub.rms);

  const double larger = std::max(lin.rms, sub.rms);
  if (std::abs(lin.rms - sub.rms) <= kInconclusiveBand * larger) {
    report.regime = Regime::Inconclusive;
    return report;
  }
  if (lin.rms < sub.rms) {
    if (lin.slope < 0.0) {
      report.regime = Regime::Linear;
      report.fitted_Q = std::exp(lin.slope);
      report.fit_residual = lin.rms;
    }
    return report;
  }
  if (sub.slope < 0.0) {
    report.regime = Regime::Sublinear;
    // e_n ~ n^p with p = -1 / (2 theta - 1)
    report.fitted_theta = 0.5 * (1.0 - 1.0 / sub.slope);
    report.fit_residual = sub.rms;
  }
  return report;
}

}  // namespace padisno::diagnostics
