#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "padisno/diagnostics.hpp"
#include "padisno/errors.hpp"
#include "padisno/solver.hpp"

using namespace padisno;

namespace {

SolverConfig basic(Variant v, double s, double a, double b, int iters = 200) {
  SolverConfig c;
  c.variant = v;
  c.step_size = s;
  c.schedule = InertialSchedule::constant(a, b);
  c.max_iters = iters;
  c.tol_displacement = 0.0;
  return c;
}

}  // namespace

TEST_CASE("step-size bounds") {
  CHECK(max_step_size(Variant::CPadisno, false, 0.0, 0.0, 14.0) == 1.0 / 7.0);
  CHECK(max_step_size(Variant::Padisno, false, 0.0, 0.0, 1.0) == 1.0);
  CHECK(max_step_size(Variant::Padisno, false, 0.25, 0.5, 1.0) == doctest::Approx(0.25));
  CHECK(max_step_size(Variant::CPadisno, false, -0.5, 1.0, 2.0) == doctest::Approx(1.0 / 6.0));
  CHECK(max_step_size(Variant::Padisno, true, 0.25, 0.5, 1.0) == doctest::Approx(0.5));
  CHECK(max_step_size(Variant::CPadisno, true, 0.5, 0.25, 4.0) == doctest::Approx(0.5));
  CHECK(std::isinf(max_step_size(Variant::Padisno, true, 0.1, 0.0, 1.0)));
  CHECK(std::isinf(max_step_size(Variant::CPadisno, true, 0.9, 0.0, 1.0)));
  // sign of the limits does not matter
  CHECK(max_step_size(Variant::CPadisno, false, -0.3, -2.0, 3.0) ==
        max_step_size(Variant::CPadisno, false, 0.3, 2.0, 3.0));
  CHECK_THROWS_AS(max_step_size(Variant::Padisno, false, 0.5, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(max_step_size(Variant::CPadisno, false, -1.0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(max_step_size(Variant::CPadisno, false, 0.0, 0.0, 0.0), ParameterError);
  // c-padisno allows twice the padisno step at alpha = 0
  CHECK(max_step_size(Variant::CPadisno, false, 0.0, 1.5, 2.0) ==
        2.0 * max_step_size(Variant::Padisno, false, 0.0, 1.5, 2.0));
}

TEST_CASE("schedules") {
  const auto r = InertialSchedule::ramped(0.6, -2.0);
  CHECK(r.alpha(0) == 0.0);
  CHECK(r.beta(0) == 0.0);
  CHECK(r.alpha(10) == doctest::Approx(0.6 * 10 / 13.1));
  CHECK(r.beta(10) == doctest::Approx(-2.0 * 10 / 13.1));
  CHECK(r.alpha_sup == 0.6);
  CHECK(r.beta_sup == 2.0);
  CHECK(r.beta_limit == -2.0);
  CHECK_NOTHROW(r.validate());
  CHECK_THROWS_AS(InertialSchedule::ramped(0.1, 0.1, 0.0), ParameterError);

  InertialSchedule lying = InertialSchedule::constant(0.3, 0.0);
  lying.alpha_sup = 0.1;
  CHECK_THROWS_AS(lying.validate(), ParameterError);
  InertialSchedule missing;
  CHECK_THROWS_AS(missing.validate(), ParameterError);
}

TEST_CASE("variant names") {
  CHECK(to_string(Variant::Padisno) == "padisno");
  CHECK(to_string(Variant::CPadisno) == "c-padisno");
  CHECK(variant_from_string("c-padisno") == Variant::CPadisno);
  CHECK(variant_from_string("PADISNO") == Variant::Padisno);
  CHECK_THROWS_AS(variant_from_string("fista"), ParameterError);
}

TEST_CASE("single step follows the extrapolation formulas") {
  const CompositeObjective p = make_strongly_convex_test(3, 0.5, 0.2);
  SolverConfig c = basic(Variant::CPadisno, 0.3, 0.4, -0.7);
  Vector prev(3), curr(3);
  prev << 0.1, -0.2, 0.3;
  curr << 0.5, 0.0, -0.4;
  const StepResult st = step(prev, curr, 5, c, p);
  const Vector y = curr + 0.4 * (curr - prev);
  const Vector z = curr - 0.7 * (curr - prev);
  CHECK((st.y - y).norm() < 1e-15);
  CHECK((st.z - z).norm() < 1e-15);
  const Vector expected = prox_l1(y - 0.3 * p.smooth.gradient(z), 0.3 * 0.2);
  CHECK((st.next - expected).norm() < 1e-15);
}

TEST_CASE("zero inertia reduces to plain forward-backward") {
  const CompositeObjective p = make_strongly_convex_test(5, 0.2);
  const SolverConfig c = basic(Variant::CPadisno, 0.9, 0.0, 0.0, 50);
  const Trajectory t = run(Vector::Ones(5), c, p);
  Vector x = Vector::Ones(5);
  for (int n = 1; n <= 50; ++n) {
    x = p.nonsmooth.prox(x - 0.9 * p.smooth.gradient(x), 0.9);
    CHECK((t.records[static_cast<std::size_t>(n)].x - x).norm() < 1e-14);
  }
}

TEST_CASE("trajectory bookkeeping") {
  const CompositeObjective p = make_strongly_convex_test(4, 0.3);
  SolverConfig c = basic(Variant::Padisno, 0.15, 0.2, 1.0, 30);
  const Trajectory t = run(Vector::Ones(4), c, p);
  REQUIRE(t.size() == 31);
  CHECK(t.termination == Termination::MaxIters);
  CHECK(t.records[0].displacement == 0.0);
  for (std::size_t n = 0; n < t.size(); ++n) {
    const auto& r = t.records[n];
    CHECK(r.n == static_cast<int>(n));
    CHECK(r.fg_value == doctest::Approx(p.value(r.x)).epsilon(1e-15));
    REQUIRE(r.y.size() == 4);
    REQUIRE(r.z.size() == 4);
    const Vector prev = n == 0 ? r.x : t.records[n - 1].x;
    CHECK((r.y - (r.x + 0.2 * (r.x - prev))).norm() < 1e-15);
    CHECK((r.z - (r.x + 1.0 * (r.x - prev))).norm() < 1e-15);
    if (n > 0) CHECK(r.displacement == doctest::Approx((r.x - prev).norm()));
  }
  CHECK(t.config_snapshot.step_size == 0.15);

  c.max_iters = 0;
  const Trajectory empty_run = run(Vector::Ones(4), c, p);
  CHECK(empty_run.size() == 1);
  CHECK(empty_run.termination == Termination::MaxIters);
}

TEST_CASE("stopping rules") {
  const CompositeObjective p = make_strongly_convex_test(4, 0.5);
  SolverConfig c = basic(Variant::CPadisno, 1.0, 0.0, 0.0, 10000);
  c.tol_displacement = 1e-10;
  const Trajectory t1 = run(Vector::Zero(4), c, p);
  CHECK(t1.termination == Termination::DisplacementTol);
  CHECK(t1.back().displacement < 1e-10);

  c.tol_displacement = 0.0;
  c.target_value = p.known_minimum->value;
  c.tol_objective = 1e-8;
  const Trajectory t2 = run(Vector::Zero(4), c, p);
  CHECK(t2.termination == Termination::ObjectiveTol);
  CHECK(std::abs(t2.back().fg_value - p.known_minimum->value) < 1e-8);
  CHECK(std::abs(t2.records[t2.size() - 2].fg_value - p.known_minimum->value) >= 1e-8);
}

TEST_CASE("step-size gate") {
  const CompositeObjective toy = make_toy2d();
  SolverConfig c = basic(Variant::CPadisno, 1.0 / 7.0, 0.0, 0.0, 10);
  CHECK_THROWS_AS(run(Vector::Zero(2), c, toy), StepSizeError);
  c.step_size = std::nextafter(1.0 / 7.0, 0.0);
  CHECK_NOTHROW(run(Vector::Zero(2), c, toy));
  c.step_size = 0.5;
  c.allow_unsafe_step = true;
  CHECK_NOTHROW(run(Vector::Zero(2), c, toy));

  // alpha outside the admissible range is a parameter error unless overridden
  SolverConfig f = basic(Variant::CPadisno, 1.0 / 14.0, 1.0, 1.0, 10);
  CHECK_THROWS_AS(run(Vector::Zero(2), f, toy), ParameterError);
  f.allow_unsafe_step = true;
  CHECK_NOTHROW(run(Vector::Zero(2), f, toy));
}

TEST_CASE("configuration validation") {
  const CompositeObjective toy = make_toy2d();
  SolverConfig c = basic(Variant::CPadisno, 0.1, 0.0, 0.0, 10);
  SUBCASE("nonpositive step") {
    c.step_size = 0.0;
    CHECK_THROWS_AS(run(Vector::Zero(2), c, toy), ParameterError);
  }
  SUBCASE("negative iterations") {
    c.max_iters = -1;
    CHECK_THROWS_AS(run(Vector::Zero(2), c, toy), ParameterError);
  }
  SUBCASE("negative tolerance") {
    c.tol_displacement = -1.0;
    CHECK_THROWS_AS(run(Vector::Zero(2), c, toy), ParameterError);
  }
  SUBCASE("non-finite start") {
    Vector x0(2);
    x0 << std::numeric_limits<double>::quiet_NaN(), 0.0;
    CHECK_THROWS_AS(run(x0, c, toy), ParameterError);
  }
  SUBCASE("c-padisno refuses a nonconvex f") {
    CompositeObjective q = make_strongly_convex_test(2, 1.0);
    q.nonsmooth = oracles::l0(0.1);
    CHECK_THROWS_AS(run(Vector::Zero(2), c, q), ParameterError);
    c.variant = Variant::Padisno;
    c.step_size = 0.5;
    CHECK_NOTHROW(run(Vector::Zero(2), c, q));
  }
}

TEST_CASE("oracle failures surface as typed errors") {
  CompositeObjective q = make_strongly_convex_test(2, 1.0);
  SolverConfig c = basic(Variant::CPadisno, 0.5, 0.0, 0.0, 5);
  SUBCASE("gradient") {
    q.smooth.gradient = [](const Vector& x) { return Vector::Constant(x.size(), std::nan("")); };
    CHECK_THROWS_AS(run(Vector::Zero(2), c, q), NumericalError);
  }
  SUBCASE("prox") {
    q.nonsmooth.prox = [](const Vector&, double) { return Vector::Zero(5); };
    CHECK_THROWS_AS(run(Vector::Zero(2), c, q), OracleError);
  }
}

TEST_CASE("property: admissible constant inertia gives monotone Lyapunov values") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> frac(0.05, 0.99);
  const CompositeObjective p = make_strongly_convex_test(6, 0.1);
  for (int trial = 0; trial < 60; ++trial) {
    const Variant v = trial % 2 == 0 ? Variant::Padisno : Variant::CPadisno;
    const double a = (v == Variant::Padisno ? 0.499 : 0.999) * u(rng);
    const double b = 3.0 * u(rng);
    const double s = frac(rng) * max_step_size(v, false, a, b, p.smooth.lipschitz);
    const Vector x0 = oracle::random_vector(rng, 6, -3.0, 3.0);
    const Trajectory t = run(x0, basic(v, s, a, b, 300), p);
    const auto cert = diagnostics::check_descent(t, p);
    CHECK(cert.violations.empty());
    for (std::size_t n = 1; n < cert.delta_seq.size(); ++n) CHECK(cert.delta_seq[n] > 0.0);
  }
}
