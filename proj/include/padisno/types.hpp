#pragma once

#include <Eigen/Core>

namespace padisno {

using Vector = Eigen::VectorXd;

/// Axis-aligned box [lower, upper] (componentwise).
struct Box {
  Vector lower;
  Vector upper;

  bool contains(const Vector& x) const {
    return x.size() == lower.size() && (x.array() >= lower.array()).all() &&
           (x.array() <= upper.array()).all();
  }
  bool contains_strictly(const Vector& x) const {
    return x.size() == lower.size() && (x.array() > lower.array()).all() &&
           (x.array() < upper.array()).all();
  }
};

inline bool all_finite(const Vector& x) { return x.array().isFinite().all(); }

}  // namespace padisno
