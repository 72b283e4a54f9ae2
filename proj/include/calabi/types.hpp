#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace calabi {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using Tensor3 = std::array<Mat2, 2>;
using Tensor4 = std::array<Tensor3, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

inline double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

inline Mat2 inverse(const Mat2& m) {
  const double d = det(m);
  return {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

inline Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
  const double tr = 0.5 * (m[0][0] + m[1][1]);
  const double off = 0.5 * (m[0][1] + m[1][0]);
  const double r = std::hypot(0.5 * (m[0][0] - m[1][1]), off);
  return {tr - r, tr + r};
}

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation on or outside the polytope boundary.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input that cannot produce a meaningful object (empty grid, bad polytope).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Hessian of the potential is not positive definite where curvature is requested.
class CurvatureUndefined : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failure (Newton non-convergence and similar).
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Hypothesis of an estimate chain violated.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace calabi
