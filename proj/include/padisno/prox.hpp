#pragma once

#include <functional>

#include "padisno/imaging.hpp"
#include "padisno/types.hpp"

namespace padisno {

/// Non-smooth term f together with a selection of its proximal map
///
///   prox(x, s) in argmin_y  f(y) + |y - x|^2 / (2 s).
///
/// For nonconvex f the argmin may be set-valued; the oracle must return one
/// minimizer deterministically. A nonconvex oracle must be bounded below so
/// that the subproblem has a minimizer for every x.
struct ProxOracle {
  std::function<double(const Vector&)> evaluate;
  std::function<Vector(const Vector&, double)> prox;
  bool convex = true;
  bool bounded_below = true;

  /// Throws ParameterError when the flags violate the contract above.
  void validate() const;
};

/// Hard threshold: t when |t| > sqrt(2 gamma_lambda), else 0 (ties go to 0).
double prox_l0_scalar(double t, double gamma_lambda);
Vector prox_l0_vector(const Vector& x, double gamma_lambda);

/// W^T prox_l0(W x) for the orthonormal Haar transform W.
Vector prox_wavelet_l0(const Vector& x, double gamma_lambda, const imaging::HaarTransform& wavelet);

/// prox of lambda * |x|^3 (Euclidean norm cubed): radial shrink by
/// 2 / (1 + sqrt(1 + 12 lambda |x|)).
Vector prox_norm_cubed(const Vector& x, double lambda);

/// Soft threshold.
Vector prox_l1(const Vector& x, double gamma_lambda);

namespace oracles {

ProxOracle zero();
ProxOracle norm_cubed();
/// weight * |x|_1
ProxOracle l1(double weight);
/// weight * |x|_0
ProxOracle l0(double weight);
/// weight * |W x|_0 with W the Haar transform
ProxOracle wavelet_l0(double weight, imaging::HaarTransform wavelet);

}  // namespace oracles

}  // namespace padisno
