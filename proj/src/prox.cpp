#include "padisno/prox.hpp"

#include <algorithm>
#include <cmath>

#include "padisno/errors.hpp"

namespace padisno {

void ProxOracle::validate() const {
  if (!evaluate || !prox) {
    throw ParameterError("prox oracle is missing its evaluate or prox callback");
  }
  if (!convex && !bounded_below) {
    throw ParameterError("a nonconvex prox oracle must be bounded below");
  }
}

double prox_l0_scalar(double t, double gamma_lambda) {
  if (!(gamma_lambda > 0.0)) {
    throw ParameterError("prox_l0: gamma_lambda must be positive");
  }
  return std::abs(t) > std::sqrt(2.0 * gamma_lambda) ? t : 0.0;
}

Vector prox_l0_vector(const Vector& x, double gamma_lambda) {
  if (!(gamma_lambda > 0.0)) {
    throw ParameterError("prox_l0: gamma_lambda must be positive");
  }
  const double threshold = std::sqrt(2.0 * gamma_lambda);
  return x.unaryExpr([threshold](double t) { return std::abs(t) > threshold ? t : 0.0; });
}

Vector prox_wavelet_l0(const Vector& x, double gamma_lambda, const imaging::HaarTransform& wavelet) {
  if (x.size() != wavelet.size()) {
    throw ParameterError("prox_wavelet_l0: dimension does not match the wavelet transform");
  }
  return wavelet.synthesize(prox_l0_vector(wavelet.analyze(x), gamma_lambda));
}

Vector prox_norm_cubed(const Vector& x, double lambda) {
  if (!(lambda > 0.0)) {
    throw ParameterError("prox_norm_cubed: lambda must be positive");
  }
  const double factor = 2.0 / (1.0 + std::sqrt(1.0 + 12.0 * lambda * x.norm()));
  return factor * x;
}

Vector prox_l1(const Vector& x, double gamma_lambda) {
  if (!(gamma_lambda >= 0.0)) {
    throw ParameterError("prox_l1: gamma_lambda must be nonnegative");
  }
  return x.unaryExpr([gamma_lambda](double t) {
    const double m = std::abs(t) - gamma_lambda;
    return m > 0.0 ? std::copysign(m, t) : 0.0;
  });
}

namespace oracles {

ProxOracle zero() {
  return ProxOracle{
      [](const Vector&) { return 0.0; },
      [](const Vector& x, double) { return x; },
      true,
      true,
  };
}

ProxOracle norm_cubed() {
  return ProxOracle{
      [](const Vector& x) {
        const double r = x.norm();
        return r * r * r;
      },
      [](const Vector& x, double s) { return prox_norm_cubed(x, s); },
      true,
      true,
  };
}

ProxOracle l1(double weight) {
  if (!(weight >= 0.0)) {
    throw ParameterError("l1 weight must be nonnegative");
  }
  return ProxOracle{
      [weight](const Vector& x) { return weight * x.lpNorm<1>(); },
      [weight](const Vector& x, double s) { return prox_l1(x, weight * s); },
      true,
      true,
  };
}

ProxOracle l0(double weight) {
  if (!(weight > 0.0)) {
    throw ParameterError("l0 weight must be positive");
  }
  return ProxOracle{
      [weight](const Vector& x) { return weight * static_cast<double>((x.array() != 0.0).count()); },
      [weight](const Vector& x, double s) { return prox_l0_vector(x, weight * s); },
      false,
      true,
  };
}

ProxOracle wavelet_l0(double weight, imaging::HaarTransform wavelet) {
  if (!(weight > 0.0)) {
    throw ParameterError("l0 weight must be positive");
  }
  return ProxOracle{
      [weight, wavelet](const Vector& x) {
        // Coefficients zeroed by the prox come back at roundoff level after
        // the synthesis/analysis round trip; count those as zero.
        const Vector c = wavelet.analyze(x);
        const double floor = 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff());
        return weight * static_cast<double>((c.array().abs() > floor).count());
      },
      [weight, wavelet](const Vector& x, double s) { return prox_wavelet_l0(x, weight * s, wavelet); },
      false,
      true,
  };
}

}  // namespace oracles

}  // namespace padisno
