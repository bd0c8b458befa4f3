#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string_view>

#include "padisno/types.hpp"

namespace padisno::imaging {

/// Grayscale image, row-major pixel storage. Values are nominally in [0, 1]
/// but noise injection does not clip, so the range is not enforced.
struct Image {
  int rows = 0;
  int cols = 0;
  Vector pixels;

  Image() = default;
  Image(int rows, int cols);
  Image(int rows, int cols, Vector pixels);

  static Image constant(int rows, int cols, double value);

  double& at(int r, int c) { return pixels[static_cast<Eigen::Index>(r) * cols + c]; }
  double at(int r, int c) const { return pixels[static_cast<Eigen::Index>(r) * cols + c]; }
  Eigen::Index size() const { return pixels.size(); }
};

/// Orthonormal separable 2-D Haar transform with dyadic (Mallat) packing:
/// after each level the approximation block occupies the top-left quarter of
/// the previous approximation block, details fill the other three quarters.
class HaarTransform {
 public:
  HaarTransform(int rows, int cols, int levels = 4);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int levels() const { return levels_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(rows_) * cols_; }

  Vector analyze(const Vector& pixels) const;
  Vector synthesize(const Vector& coeffs) const;

 private:
  int rows_;
  int cols_;
  int levels_;
};

Vector haar_analyze(const Image& img);
Image haar_synthesize(const Vector& coeffs, int rows, int cols);

/// Centered Gaussian samples exp(-(i^2+j^2)/(2 sigma^2)) normalized to sum 1.
Eigen::MatrixXd gaussian_kernel(int size = 9, double sigma = 4.0);

/// Periodic 2-D convolution on rows x cols images.
class BlurOperator {
 public:
  BlurOperator(Eigen::MatrixXd kernel, int rows, int cols);

  static BlurOperator gaussian(int rows, int cols, int size = 9, double sigma = 4.0);
  static BlurOperator identity(int rows, int cols);

  const Eigen::MatrixXd& kernel() const { return kernel_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Vector apply(const Vector& pixels) const;
  Vector adjoint(const Vector& pixels) const;
  Image apply(const Image& img) const;
  Image adjoint(const Image& img) const;

  /// Upper bound on the operator 2-norm: the kernel's absolute sum.
  double norm_bound() const;

 private:
  void check(Eigen::Index n) const;

  Eigen::MatrixXd kernel_;
  int rows_;
  int cols_;
};

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);
Image add_salt_pepper(const Image& img, double density, std::uint64_t seed);

/// Improvement in SNR in dB. Returns +infinity when the estimate equals the
/// original; throws DataError when the observation equals the original.
double isnr(const Image& original, const Image& observed, const Image& estimate);

/// Binary PGM (P5, maxval 255). Reading normalizes to [0, 1].
Image pgm_read(const std::filesystem::path& path);
Image pgm_parse(std::string_view bytes);
void pgm_write(const Image& img, const std::filesystem::path& path);

enum class Pattern { Checkerboard, Gradient, Disk, Composite };

Image synthetic_image(Pattern pattern, int size = 64);

}  // namespace padisno::imaging
