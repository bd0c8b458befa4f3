#include "padisno/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "padisno/errors.hpp"

namespace padisno::imaging {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// One analysis level along rows and then columns of the top-left m x n block.
void analyze_level(RowMajorMatrix& c, int m, int n, RowMajorMatrix& tmp) {
  const int hn = n / 2;
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < hn; ++j) {
      const double a = c(r, 2 * j);
      const double b = c(r, 2 * j + 1);
      tmp(r, j) = (a + b) * kInvSqrt2;
      tmp(r, hn + j) = (a - b) * kInvSqrt2;
    }
  }
  const int hm = m / 2;
  for (int i = 0; i < hm; ++i) {
    for (int col = 0; col < n; ++col) {
      const double a = tmp(2 * i, col);
      const double b = tmp(2 * i + 1, col);
      c(i, col) = (a + b) * kInvSqrt2;
      c(hm + i, col) = (a - b) * kInvSqrt2;
    }
  }
}

void synthesize_level(RowMajorMatrix& c, int m, int n, RowMajorMatrix& tmp) {
  const int hm = m / 2;
  for (int i = 0; i < hm; ++i) {
    for (int col = 0; col < n; ++col) {
      const double s = c(i, col);
      const double d = c(hm + i, col);
      tmp(2 * i, col) = (s + d) * kInvSqrt2;
      tmp(2 * i + 1, col) = (s - d) * kInvSqrt2;
    }
  }
  const int hn = n / 2;
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < hn; ++j) {
      const double s = tmp(r, j);
      const double d = tmp(r, hn + j);
      c(r, 2 * j) = (s + d) * kInvSqrt2;
      c(r, 2 * j + 1) = (s - d) * kInvSqrt2;
    }
  }
}

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

Image::Image(int rows, int cols) : Image(rows, cols, Vector::Zero(static_cast<Eigen::Index>(rows) * cols)) {}

Image::Image(int rows, int cols, Vector pixels) : rows(rows), cols(cols), pixels(std::move(pixels)) {
  if (rows <= 0 || cols <= 0) {
    throw ParameterError("image dimensions must be positive");
  }
  if (this->pixels.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw ParameterError("pixel count does not match image dimensions");
  }
}

Image Image::constant(int rows, int cols, double value) {
  return Image(rows, cols, Vector::Constant(static_cast<Eigen::Index>(rows) * cols, value));
}

HaarTransform::HaarTransform(int rows, int cols, int levels) : rows_(rows), cols_(cols), levels_(levels) {
  if (levels < 0 || levels > 30) {
    throw ParameterError("Haar level count out of range");
  }
  const int block = 1 << levels;
  if (rows <= 0 || cols <= 0 || rows % block != 0 || cols % block != 0) {
    throw ParameterError("image dimensions " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " are not divisible by " + std::to_string(block));
  }
}

Vector HaarTransform::analyze(const Vector& pixels) const {
  if (pixels.size() != size()) {
    throw ParameterError("Haar analysis: input size does not match transform");
  }
  RowMajorMatrix c = Eigen::Map<const RowMajorMatrix>(pixels.data(), rows_, cols_);
  RowMajorMatrix tmp(rows_, cols_);
  for (int l = 0; l < levels_; ++l) {
    analyze_level(c, rows_ >> l, cols_ >> l, tmp);
  }
  return Eigen::Map<const Vector>(c.data(), size());
}

Vector HaarTransform::synthesize(const Vector& coeffs) const {
  if (coeffs.size() != size()) {
    throw ParameterError("Haar synthesis: coefficient count does not match transform");
  }
  RowMajorMatrix c = Eigen::Map<const RowMajorMatrix>(coeffs.data(), rows_, cols_);
  RowMajorMatrix tmp(rows_, cols_);
  for (int l = levels_ - 1; l >= 0; --l) {
    synthesize_level(c, rows_ >> l, cols_ >> l, tmp);
  }
  return Eigen::Map<const Vector>(c.data(), size());
}

Vector haar_analyze(const Image& img) { return HaarTransform(img.rows, img.cols).analyze(img.pixels); }

Image haar_synthesize(const Vector& coeffs, int rows, int cols) {
  if (coeffs.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw ParameterError("Haar synthesis: coefficient count does not match dimensions");
  }
  return Image(rows, cols, HaarTransform(rows, cols).synthesize(coeffs));
}

Eigen::MatrixXd gaussian_kernel(int size, double sigma) {
  if (size <= 0 || size % 2 == 0) {
    throw ParameterError("Gaussian kernel size must be a positive odd integer");
  }
  if (!(sigma > 0.0)) {
    throw ParameterError("Gaussian kernel sigma must be positive");
  }
  const int h = size / 2;
  Eigen::MatrixXd k(size, size);
  for (int i = -h; i <= h; ++i) {
    for (int j = -h; j <= h; ++j) {
      k(i + h, j + h) = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
    }
  }
  return k / k.sum();
}

BlurOperator::BlurOperator(Eigen::MatrixXd kernel, int rows, int cols)
    : kernel_(std::move(kernel)), rows_(rows), cols_(cols) {
  if (kernel_.rows() % 2 == 0 || kernel_.cols() % 2 == 0) {
    throw ParameterError("blur kernel dimensions must be odd");
  }
  if (rows <= 0 || cols <= 0) {
    throw ParameterError("blur operator dimensions must be positive");
  }
}

BlurOperator BlurOperator::gaussian(int rows, int cols, int size, double sigma) {
  return BlurOperator(gaussian_kernel(size, sigma), rows, cols);
}

BlurOperator BlurOperator::identity(int rows, int cols) {
  return BlurOperator(Eigen::MatrixXd::Ones(1, 1), rows, cols);
}

void BlurOperator::check(Eigen::Index n) const {
  if (n != static_cast<Eigen::Index>(rows_) * cols_) {
    throw ParameterError("blur operator: input size does not match operator dimensions");
  }
}

// (A u)(r, c) = sum_{i,j} k(i, j) u(r - i, c - j), offsets centred on the kernel.
Vector BlurOperator::apply(const Vector& u) const {
  check(u.size());
  const int hr = static_cast<int>(kernel_.rows()) / 2;
  const int hc = static_cast<int>(kernel_.cols()) / 2;
  Vector out(u.size());
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      double acc = 0.0;
      for (int i = -hr; i <= hr; ++i) {
        const int rr = wrap(r - i, rows_);
        for (int j = -hc; j <= hc; ++j) {
          acc += kernel_(i + hr, j + hc) * u[static_cast<Eigen::Index>(rr) * cols_ + wrap(c - j, cols_)];
        }
      }
      out[static_cast<Eigen::Index>(r) * cols_ + c] = acc;
    }
  }
  return out;
}

// Correlation with the same kernel: (A^T v)(r, c) = sum_{i,j} k(i, j) v(r + i, c + j).
Vector BlurOperator::adjoint(const Vector& v) const {
  check(v.size());
  const int hr = static_cast<int>(kernel_.rows()) / 2;
  const int hc = static_cast<int>(kernel_.cols()) / 2;
  Vector out(v.size());
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      double acc = 0.0;
      for (int i = -hr; i <= hr; ++i) {
        const int rr = wrap(r + i, rows_);
        for (int j = -hc; j <= hc; ++j) {
          acc += kernel_(i + hr, j + hc) * v[static_cast<Eigen::Index>(rr) * cols_ + wrap(c + j, cols_)];
        }
      }
      out[static_cast<Eigen::Index>(r) * cols_ + c] = acc;
    }
  }
  return out;
}

Image BlurOperator::apply(const Image& img) const { return Image(img.rows, img.cols, apply(img.pixels)); }

Image BlurOperator::adjoint(const Image& img) const { return Image(img.rows, img.cols, adjoint(img.pixels)); }

double BlurOperator::norm_bound() const { return kernel_.cwiseAbs().sum(); }

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw ParameterError("noise standard deviation must be nonnegative");
  }
  Image out = img;
  if (sigma == 0.0) {
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out.pixels[i] += normal(rng);
  }
  return out;
}

Image add_salt_pepper(const Image& img, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw ParameterError("salt-and-pepper density must lie in [0, 1]");
  }
  Image out = img;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const bool corrupt = unit(rng) < density;
    const bool salt = unit(rng) < 0.5;
    if (corrupt) {
      out.pixels[i] = salt ? 1.0 : 0.0;
    }
  }
  return out;
}

double isnr(const Image& original, const Image& observed, const Image& estimate) {
  if (original.rows != observed.rows || original.cols != observed.cols || original.rows != estimate.rows ||
      original.cols != estimate.cols) {
    throw ParameterError("ISNR: image dimensions differ");
  }
  const double num = (original.pixels - observed.pixels).squaredNorm();
  const double den = (original.pixels - estimate.pixels).squaredNorm();
  if (num == 0.0) {
    throw DataError("ISNR undefined: observation equals the original image");
  }
  if (den == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(num / den);
}

namespace {

// Reads one header token, skipping whitespace and '#' comments.
std::string next_token(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    const char ch = bytes[pos];
    if (ch == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n' && bytes[pos] != '\r') {
        ++pos;
      }
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) && bytes[pos] != '#') {
    token.push_back(bytes[pos++]);
  }
  if (token.empty()) {
    throw FormatError("PGM: truncated header");
  }
  return token;
}

int parse_positive(const std::string& token, const char* what) {
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      token.size() > 9) {
    throw FormatError(std::string("PGM: invalid ") + what + " '" + token + "'");
  }
  const int v = std::stoi(token);
  if (v <= 0) {
    throw FormatError(std::string("PGM: ") + what + " must be positive");
  }
  return v;
}

}  // namespace

Image pgm_parse(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError("PGM: expected binary 'P5' magic");
  }
  std::size_t pos = 2;
  const int cols = parse_positive(next_token(bytes, pos), "width");
  const int rows = parse_positive(next_token(bytes, pos), "height");
  const int maxval = parse_positive(next_token(bytes, pos), "maxval");
  if (maxval != 255) {
    throw FormatError("PGM: only maxval 255 is supported");
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw FormatError("PGM: missing separator before pixel data");
  }
  ++pos;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (bytes.size() - pos < count) {
    throw FormatError("PGM: truncated pixel data");
  }
  Image img(rows, cols);
  for (std::size_t i = 0; i < count; ++i) {
    img.pixels[static_cast<Eigen::Index>(i)] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
  }
  return img;
}

Image pgm_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return pgm_parse(bytes);
}

void pgm_write(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
  std::string payload(static_cast<std::size_t>(img.size()), '\0');
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img.pixels[i], 0.0, 1.0);
    payload[static_cast<std::size_t>(i)] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

Image synthetic_image(Pattern pattern, int size) {
  if (size <= 0) {
    throw ParameterError("synthetic image size must be positive");
  }
  Image img(size, size);
  const double centre = size / 2.0 - 0.5;
  const double radius = size / 4.0;
  const int cell = std::max(1, size / 8);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double checker = ((r / cell + c / cell) % 2 == 0) ? 0.0 : 1.0;
      const double gradient = size > 1 ? (r + c) / (2.0 * (size - 1)) : 0.0;
      const double disk = ((r - centre) * (r - centre) + (c - centre) * (c - centre) < radius * radius) ? 1.0 : 0.0;
      double v = 0.0;
      switch (pattern) {
        case Pattern::Checkerboard: v = 0.2 + 0.6 * checker; break;
        case Pattern::Gradient: v = gradient; break;
        case Pattern::Disk: v = 0.1 + 0.8 * disk; break;
        case Pattern::Composite: v = 0.3 * checker + 0.4 * gradient + 0.3 * disk; break;
      }
      img.at(r, c) = v;
    }
  }
  return img;
}

}  // namespace padisno::imaging
