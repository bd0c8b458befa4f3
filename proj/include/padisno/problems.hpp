#pragma once

#include <functional>
#include <optional>

#include "padisno/imaging.hpp"
#include "padisno/prox.hpp"
#include "padisno/types.hpp"

namespace padisno {

/// Smooth term g with its gradient and a Lipschitz constant for the gradient,
/// valid on `domain_box` when one is given (everywhere otherwise).
struct SmoothPart {
  std::function<double(const Vector&)> evaluate;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz = 0.0;
  std::optional<Box> domain_box;
};

struct KnownMinimum {
  Vector point;
  double value = 0.0;
};

/// f + g with f non-smooth (prox oracle) and g smooth.
struct CompositeObjective {
  ProxOracle nonsmooth;
  SmoothPart smooth;
  std::optional<KnownMinimum> known_minimum;

  double value(const Vector& x) const { return nonsmooth.evaluate(x) + smooth.evaluate(x); }
};

/// f(x, y) = |(x, y)|^3, g(x, y) = (x^2 - y)^2 + x^2, L_g = 14 on [-1, 1]^2.
CompositeObjective make_toy2d();

/// Hessian norm of the toy g by the closed-form case split
/// 8x^2 - 4y + 2 when x^2 >= y, 4x^2 + 2 otherwise.
double hessian_norm_toy2d(double x, double y);

/// Largest absolute eigenvalue of the toy Hessian [[12x^2-4y+2, -4x], [-4x, 2]].
/// Agrees with hessian_norm_toy2d on the axis x = 0 only.
double hessian_spectral_norm_toy2d(double x, double y);

/// Supremum of hessian_norm_toy2d over a 2-D box.
double lipschitz_on_box(const Box& box);

/// g(x) = sum log(1 + (A x - b)_i^2), gradient A^T (2 r / (1 + r^2)).
/// Lipschitz constant 2 |A|^2, bounded via the kernel's absolute sum.
SmoothPart make_log_misfit(const imaging::BlurOperator& blur, const Vector& observed);

/// Separable quadratic g(x) = 1/2 sum_i d_i (x_i - c_i)^2 with curvatures
/// d_i spread linearly over [mu, max(mu, 1)], plus f = l1_weight * |x|_1.
/// The minimizer is the soft-threshold x_i = shrink(c_i, l1_weight / d_i).
/// When `center` is omitted a fixed pattern is used in which even
/// coordinates stay active and odd ones are thresholded to zero.
CompositeObjective make_strongly_convex_test(int dim, double mu, double l1_weight = 0.1,
                                             std::optional<Vector> center = std::nullopt);

}  // namespace padisno
