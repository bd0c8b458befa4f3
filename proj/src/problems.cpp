#include "padisno/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "padisno/errors.hpp"

namespace padisno {

CompositeObjective make_toy2d() {
  SmoothPart g;
  g.evaluate = [](const Vector& p) {
    const double x = p[0];
    const double y = p[1];
    const double d = x * x - y;
    return d * d + x * x;
  };
  g.gradient = [](const Vector& p) {
    const double x = p[0];
    const double y = p[1];
    Vector grad(2);
    grad << 4.0 * x * x * x - 4.0 * x * y + 2.0 * x, 2.0 * y - 2.0 * x * x;
    return grad;
  };
  g.lipschitz = 14.0;
  g.domain_box = Box{Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)};

  return CompositeObjective{oracles::norm_cubed(), std::move(g), KnownMinimum{Vector::Zero(2), 0.0}};
}

double hessian_norm_toy2d(double x, double y) {
  return x * x >= y ? 8.0 * x * x - 4.0 * y + 2.0 : 4.0 * x * x + 2.0;
}

double hessian_spectral_norm_toy2d(double x, double y) {
  const double a = 12.0 * x * x - 4.0 * y + 2.0;
  const double b = -4.0 * x;
  const double c = 2.0;
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return std::max(std::abs(mean + radius), std::abs(mean - radius));
}

// Both branches grow with x^2 and the first falls with y, and the branches
// meet continuously on y = x^2, so the supremum sits at the largest |x| and
// the lowest y of the box.
double lipschitz_on_box(const Box& box) {
  if (box.lower.size() != 2 || box.upper.size() != 2) {
    throw ParameterError("lipschitz_on_box expects a 2-D box");
  }
  if ((box.lower.array() > box.upper.array()).any()) {
    throw ParameterError("lipschitz_on_box: empty box");
  }
  const double x = std::max(std::abs(box.lower[0]), std::abs(box.upper[0]));
  return hessian_norm_toy2d(x, box.lower[1]);
}

SmoothPart make_log_misfit(const imaging::BlurOperator& blur, const Vector& observed) {
  const auto n = static_cast<Eigen::Index>(blur.rows()) * blur.cols();
  if (observed.size() != n) {
    throw ParameterError("log misfit: observation size does not match the blur operator");
  }
  auto op = std::make_shared<const imaging::BlurOperator>(blur);
  auto b = std::make_shared<const Vector>(observed);

  SmoothPart g;
  g.evaluate = [op, b](const Vector& x) {
    const Vector r = op->apply(x) - *b;
    return r.array().square().log1p().sum();
  };
  g.gradient = [op, b](const Vector& x) {
    const Vector r = op->apply(x) - *b;
    const Vector w = (2.0 * r.array() / (1.0 + r.array().square())).matrix();
    return op->adjoint(w);
  };
  const double a = blur.norm_bound();
  g.lipschitz = 2.0 * a * a;
  return g;
}

CompositeObjective make_strongly_convex_test(int dim, double mu, double l1_weight, std::optional<Vector> center) {
  if (dim < 1) {
    throw ParameterError("strongly convex test: dimension must be at least 1");
  }
  if (!(mu > 0.0)) {
    throw ParameterError("strongly convex test: mu must be positive");
  }
  if (!(l1_weight >= 0.0)) {
    throw ParameterError("strongly convex test: l1 weight must be nonnegative");
  }
  const double top = std::max(mu, 1.0);
  Vector d(dim);
  for (int i = 0; i < dim; ++i) {
    d[i] = dim == 1 ? mu : mu + (top - mu) * i / (dim - 1.0);
  }
  Vector c(dim);
  if (center) {
    if (center->size() != dim) {
      throw ParameterError("strongly convex test: center has the wrong dimension");
    }
    c = *center;
  } else {
    for (int i = 0; i < dim; ++i) {
      const double sign = i % 2 == 0 ? 1.0 : -1.0;
      c[i] = i % 2 == 0 ? sign * (1.0 + 2.0 * l1_weight / d[i]) : sign * 0.5 * l1_weight / d[i];
    }
  }

  SmoothPart g;
  g.evaluate = [d, c](const Vector& x) { return 0.5 * (d.array() * (x - c).array().square()).sum(); };
  g.gradient = [d, c](const Vector& x) { return (d.array() * (x - c).array()).matrix().eval(); };
  g.lipschitz = top;

  Vector xstar(dim);
  for (int i = 0; i < dim; ++i) {
    const double m = std::abs(c[i]) - l1_weight / d[i];
    xstar[i] = m > 0.0 ? std::copysign(m, c[i]) : 0.0;
  }
  ProxOracle f = l1_weight > 0.0 ? oracles::l1(l1_weight) : oracles::zero();
  CompositeObjective obj{std::move(f), std::move(g), std::nullopt};
  obj.known_minimum = KnownMinimum{xstar, obj.value(xstar)};
  return obj;
}

}  // namespace padisno
