#include <doctest.h>

#include <cmath>
#include <vector>

#include "padisno/diagnostics.hpp"
#include "padisno/errors.hpp"

using namespace padisno;
using namespace padisno::diagnostics;

namespace {

Trajectory scripted(const std::vector<double>& xs, const std::vector<double>& values, double s) {
  Trajectory t;
  t.config_snapshot.variant = Variant::CPadisno;
  t.config_snapshot.step_size = s;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    IterateRecord r;
    r.n = static_cast<int>(n);
    r.x = Vector::Constant(1, xs[n]);
    r.fg_value = values[n];
    r.displacement = n == 0 ? 0.0 : std::abs(xs[n] - xs[n - 1]);
    t.records.push_back(r);
  }
  return t;
}

CompositeObjective dummy(double lipschitz) {
  CompositeObjective o = make_strongly_convex_test(1, 1.0);
  o.smooth.lipschitz = lipschitz;
  return o;
}

}  // namespace

TEST_CASE("delta weights") {
  CHECK(delta_n(Variant::Padisno, false, 0.5, 1.0, 0.0, 0.0) == doctest::Approx(0.5 - 0.25));
  CHECK(delta_n(Variant::CPadisno, false, 0.5, 1.0, 0.0, 0.0) == doctest::Approx(1.0 - 0.25));
  CHECK(delta_n(Variant::Padisno, true, 0.5, 1.0, 0.0, 0.0) == doctest::Approx(0.5));
  CHECK(delta_n(Variant::CPadisno, true, 0.5, 2.0, -1.0, 0.5) == doctest::Approx(1.0 + 0.5 * 0.5));
  CHECK(delta_n(Variant::CPadisno, false, 0.1, 4.0, 2.0, -1.0) == doctest::Approx(5.0 + 1.0 * (2.0 - 1.0 - 1.0)));
  CHECK_THROWS_AS(delta_n(Variant::CPadisno, false, 0.0, 1.0, 0.0, 0.0), ParameterError);

  // at the admissible bound the constant-inertia weight is still positive
  const double L = 3.0;
  const double s = max_step_size(Variant::CPadisno, false, 0.0, 1.0, L);
  CHECK(delta_n(Variant::CPadisno, false, s, L, 1.0, 1.0) > 0.0);
}

TEST_CASE("descent certificate on a scripted trajectory") {
  // s = 1, L = 1, beta = 0: delta = 1/2 - 1/4 = 1/4
  const Trajectory t = scripted({1.0, 0.5, 0.25, 0.125, 0.0625}, {4.0, 3.0, 2.0, 2.5, 1.0}, 1.0);
  const auto cert = check_descent(t, dummy(1.0));
  REQUIRE(cert.delta_seq.size() == 5);
  for (double d : cert.delta_seq) CHECK(d == doctest::Approx(0.25));
  CHECK(cert.lyapunov_seq[0] == 4.0);
  CHECK(cert.lyapunov_seq[1] == doctest::Approx(3.0 + 0.25 * 0.25));
  REQUIRE(cert.violations.size() == 1);
  CHECK(cert.violations[0].n == 2);
  CHECK(cert.violations[0].magnitude == doctest::Approx((2.5 + 0.25 * 0.125 * 0.125) - (2.0 + 0.25 * 0.0625)));
  CHECK(cert.burn_in_N == 3);
  CHECK(cert.violations_after_burn_in() == 0);
  REQUIRE(cert.descent_constant_A);
  const double e3 = cert.lyapunov_seq[3];
  const double e4 = cert.lyapunov_seq[4];
  CHECK(*cert.descent_constant_A == doctest::Approx((e3 - e4) / (0.0625 * 0.0625)));

  Trajectory empty;
  CHECK_THROWS_AS(check_descent(empty, dummy(1.0)), ParameterError);
}

TEST_CASE("descent constant is absent when nothing moves") {
  const Trajectory t = scripted({1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}, 1.0);
  const auto cert = check_descent(t, dummy(1.0));
  CHECK(cert.violations.empty());
  CHECK(cert.burn_in_N == 0);
  CHECK_FALSE(cert.descent_constant_A);
}

TEST_CASE("relative-error bound on a solver run") {
  const CompositeObjective p = make_strongly_convex_test(5, 0.2);
  SolverConfig c;
  c.variant = Variant::CPadisno;
  c.schedule = InertialSchedule::constant(0.5, -1.0);
  c.step_size = 0.9 * max_step_size(c.variant, false, 0.5, -1.0, p.smooth.lipschitz);
  c.max_iters = 200;
  c.tol_displacement = 0.0;
  const Trajectory t = run(Vector::Ones(5), c, p);
  const auto cert = check_descent(t, p);
  const H2Report h = check_h2(t, p, c.schedule, cert.burn_in_N);
  CHECK_FALSE(h.indices.empty());
  CHECK(h.indices.front() == cert.burn_in_N + 2);
  CHECK(h.max_ratio > 0.0);
  CHECK(h.max_ratio <= h.bound_b + 1e-9);

  Trajectory stripped = t;
  stripped.records[5].y.resize(0);
  CHECK_THROWS_AS(check_h2(stripped, p, c.schedule, 0), ParameterError);
  CHECK_THROWS_AS(check_h2(t, p, c.schedule, -1), ParameterError);
}

TEST_CASE("summability") {
  const std::vector<double> d = {1.0, 0.5, 0.25};
  const auto s = summability(d);
  REQUIRE(s.partial_sums.size() == 3);
  CHECK(s.partial_sums[2] == doctest::Approx(1.3125));
  CHECK_FALSE(s.converged);

  std::vector<double> g;
  for (int n = 0; n < 60; ++n) g.push_back(std::pow(0.5, n));
  CHECK(summability(g).converged);
  CHECK(summability(g).partial_sums.back() == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(summability(std::vector<double>{}).converged);
}

TEST_CASE("rate classifier on exact sequences") {
  std::vector<double> geo;
  for (int n = 1; n <= 60; ++n) geo.push_back(std::pow(0.5, n));
  const RateReport lin = fit_rate(geo);
  CHECK(lin.regime == Regime::Linear);
  REQUIRE(lin.fitted_Q);
  CHECK(*lin.fitted_Q == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lin.fit_residual < 1e-10);

  std::vector<double> pw;
  for (int n = 1; n <= 200; ++n) pw.push_back(std::pow(static_cast<double>(n), -2.0));
  const RateReport sub = fit_rate(pw);
  CHECK(sub.regime == Regime::Sublinear);
  REQUIRE(sub.fitted_theta);
  CHECK(*sub.fitted_theta == doctest::Approx(0.75).epsilon(1e-9));

  // n^{-1/(2 theta - 1)} recovers theta for a range of exponents
  for (double theta : {0.6, 0.7, 0.9}) {
    std::vector<double> e;
    for (int n = 5; n <= 400; ++n) e.push_back(3.0 * std::pow(n, -1.0 / (2.0 * theta - 1.0)));
    const RateReport r = fit_rate(e, 5);
    CHECK(r.regime == Regime::Sublinear);
    CHECK(*r.fitted_theta == doctest::Approx(theta).epsilon(1e-9));
  }

  std::vector<double> fin = {1.0, 0.5, 0.2, 0.1, 0.01, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(fit_rate(fin).regime == Regime::FiniteSteps);
  CHECK(fit_rate(std::vector<double>{1.0, 0.1, 0, 0, 0, 0, 0, 0, 0, 0}).regime == Regime::FiniteSteps);

  // a long geometric sequence passes below the floor without being finite
  std::vector<double> deep;
  for (int n = 1; n <= 100; ++n) deep.push_back(std::pow(0.5, n));
  const RateReport d = fit_rate(deep);
  CHECK(d.regime == Regime::Linear);
  CHECK(*d.fitted_Q == doctest::Approx(0.5).epsilon(1e-9));
  // ... unless it gets there too quickly to fit
  std::vector<double> quick;
  for (int n = 1; n <= 20; ++n) quick.push_back(std::pow(1e-3, n));
  CHECK(fit_rate(quick).regime == Regime::FiniteSteps);
}

TEST_CASE("rate classifier edge cases") {
  CHECK_THROWS_AS(fit_rate(std::vector<double>(5, 1.0)), ParameterError);
  std::vector<double> ok(12, 1.0);
  CHECK_THROWS_AS(fit_rate(ok, 0), ParameterError);
  std::vector<double> neg(12, 1.0);
  neg[3] = -1.0;
  CHECK_THROWS_AS(fit_rate(neg), ParameterError);
  std::vector<double> hole(12, 1.0);
  hole[4] = 0.0;
  CHECK_THROWS_AS(fit_rate(hole), ParameterError);
  // a flat sequence has no decay to classify
  CHECK(fit_rate(ok).regime == Regime::Inconclusive);
  // growth is not a rate
  std::vector<double> up;
  for (int n = 1; n <= 30; ++n) up.push_back(std::pow(1.1, n));
  const RateReport r = fit_rate(up);
  CHECK(r.regime == Regime::Inconclusive);
  CHECK_FALSE(r.fitted_Q);
}

TEST_CASE("regime names") {
  CHECK(to_string(Regime::Linear) == "Linear");
  CHECK(to_string(Regime::FiniteSteps) == "FiniteSteps");
}
