#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "geostrain/tolerances.hpp"

namespace geostrain {

// Fixed-shape row-major n x n real matrix, n in {2, 3}. The dimension is part
// of the type, so mixed-dimension arithmetic does not compile.
template <int N>
struct Matrix {
  static_assert(N == 2 || N == 3, "only 2x2 and 3x3 matrices are supported");

  std::array<double, N * N> a{};

  static constexpr int dim = N;

  double& operator()(int i, int j) { return a[i * N + j]; }
  double operator()(int i, int j) const { return a[i * N + j]; }

  static Matrix zero() { return Matrix{}; }

  static Matrix identity() {
    Matrix m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(const std::array<double, N>& d) {
    Matrix m;
    for (int i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix scaled_identity(double s) {
    Matrix m;
    for (int i = 0; i < N; ++i) m(i, i) = s;
    return m;
  }

  Matrix transpose() const {
    Matrix t;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double det() const {
    const auto& m = *this;
    if constexpr (N == 2) {
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    } else {
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
  }

  // Inverse by the adjugate formula. Throws when |det| falls at or below
  // det_tol; callers with a contract-level singularity threshold pass it here.
  Matrix inverse(double det_tol = tol::singular_det) const {
    const double d = det();
    if (!(std::abs(d) > det_tol)) throw std::domain_error("matrix is singular");
    const auto& m = *this;
    Matrix inv;
    if constexpr (N == 2) {
      inv(0, 0) = m(1, 1) / d;
      inv(0, 1) = -m(0, 1) / d;
      inv(1, 0) = -m(1, 0) / d;
      inv(1, 1) = m(0, 0) / d;
    } else {
      inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
      inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
      inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
      inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
      inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
      inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
      inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
      inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
      inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    }
    return inv;
  }

  bool is_finite() const {
    for (double v : a)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  Matrix& operator+=(const Matrix& o) {
    for (int k = 0; k < N * N; ++k) a[k] += o.a[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (int k = 0; k < N * N; ++k) a[k] -= o.a[k];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& v : a) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix x, const Matrix& y) { return x += y; }
  friend Matrix operator-(Matrix x, const Matrix& y) { return x -= y; }
  friend Matrix operator*(Matrix x, double s) { return x *= s; }
  friend Matrix operator*(double s, Matrix x) { return x *= s; }
  friend Matrix operator-(const Matrix& x) { return -1.0 * x; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    Matrix r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += x(i, k) * y(k, j);
        r(i, j) = s;
      }
    return r;
  }
};

using Mat2 = Matrix<2>;
using Mat3 = Matrix<3>;

inline Mat2 mat2(double a, double b, double c, double d) {
  return Mat2{{a, b, c, d}};
}

inline Mat3 mat3(double a, double b, double c, double d, double e, double f,
                 double g, double h, double i) {
  return Mat3{{a, b, c, d, e, f, g, h, i}};
}

// planar rotation by angle theta
inline Mat2 rot2(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return mat2(c, -s, s, c);
}

// tr(X^T Y); coincides with the elementwise product sum
template <int N>
double frobenius_inner(const Matrix<N>& x, const Matrix<N>& y) {
  double s = 0.0;
  for (int k = 0; k < N * N; ++k) s += x.a[k] * y.a[k];
  return s;
}

template <int N>
double frobenius_norm_sq(const Matrix<N>& x) {
  return frobenius_inner(x, x);
}

template <int N>
double frobenius_norm(const Matrix<N>& x) {
  return std::sqrt(frobenius_norm_sq(x));
}

template <int N>
double max_abs(const Matrix<N>& x) {
  double m = 0.0;
  for (double v : x.a) m = std::max(m, std::abs(v));
  return m;
}

template <int N>
Matrix<N> sym(const Matrix<N>& x) {
  return 0.5 * (x + x.transpose());
}

template <int N>
Matrix<N> skew(const Matrix<N>& x) {
  return 0.5 * (x - x.transpose());
}

// traceless part
template <int N>
Matrix<N> dev(const Matrix<N>& x) {
  return x - Matrix<N>::scaled_identity(x.trace() / N);
}

template <int N>
struct OrthogonalParts {
  Matrix<N> devsym;  // traceless symmetric
  Matrix<N> skw;     // antisymmetric
  Matrix<N> sph;     // spherical, (tr X / n) * 1
};

// Frobenius-orthogonal split X = dev sym X + skew X + (tr X / n) 1
template <int N>
OrthogonalParts<N> orthogonal_parts(const Matrix<N>& x) {
  OrthogonalParts<N> p;
  p.sph = Matrix<N>::scaled_identity(x.trace() / N);
  p.skw = skew(x);
  p.devsym = sym(x) - p.sph;
  return p;
}

}  // namespace geostrain
