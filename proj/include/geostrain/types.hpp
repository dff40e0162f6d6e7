#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "geostrain/eigen_sym.hpp"
#include "geostrain/matrix.hpp"
#include "geostrain/tolerances.hpp"

namespace geostrain {

// Element of SO(n). Orthogonality and orientation are verified once, at
// construction, so downstream code can rely on them.
template <int N>
class RotationMatrix {
 public:
  explicit RotationMatrix(const Matrix<N>& q) : q_(q) {
    if (!q.is_finite()) throw std::domain_error("rotation has non-finite entries");
    const double ortho = frobenius_norm(q.transpose() * q - Matrix<N>::identity());
    if (ortho > tol::rotation_orthogonality)
      throw std::domain_error("matrix is not orthogonal");
    if (!(q.det() > 0.0)) throw std::domain_error("matrix is not orientation-preserving");
  }

  static RotationMatrix from_angle(double theta)
    requires(N == 2)
  {
    return RotationMatrix(rot2(theta));
  }

  // unit quaternion (w, x, y, z), need not be normalized on input
  static RotationMatrix from_quaternion(double w, double x, double y, double z)
    requires(N == 3)
  {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (!(n > 0.0)) throw std::domain_error("zero quaternion");
    w /= n; x /= n; y /= n; z /= n;
    Mat3 q = mat3(1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
                  2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
                  2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y));
    return RotationMatrix(q);
  }

  const Matrix<N>& matrix() const { return q_; }
  RotationMatrix transpose() const { return RotationMatrix(q_.transpose()); }

 private:
  Matrix<N> q_;
};

// Symmetric positive definite matrix, verified at construction.
template <int N>
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix<N>& s) : s_(s) {
    if (!s.is_finite()) throw std::domain_error("spd matrix has non-finite entries");
    if (frobenius_norm(s - s.transpose()) > tol::spd_symmetry)
      throw std::domain_error("matrix is not symmetric");
    const auto e = jacobi_eigen_sym(s);
    if (!(e.values[0] > 0.0))
      throw std::domain_error("matrix is not positive definite");
    min_eig_ = e.values[0];
    max_eig_ = e.values[N - 1];
  }

  const Matrix<N>& matrix() const { return s_; }
  double min_eigenvalue() const { return min_eig_; }
  double max_eigenvalue() const { return max_eig_; }
  double condition() const { return max_eig_ / min_eig_; }

 private:
  Matrix<N> s_;
  double min_eig_;
  double max_eig_;
};

// F = R U with the defining residual checked against the source F.
template <int N>
struct PolarFactors {
  RotationMatrix<N> r;
  SpdMatrix<N> u;
  bool condition_warning = false;  // condition number of F above 1e8
};

// rotation angle separating two rotations
template <int N>
double rotation_angle_between(const RotationMatrix<N>& a, const RotationMatrix<N>& b) {
  const Matrix<N> rel = a.matrix().transpose() * b.matrix();
  if constexpr (N == 2) {
    return std::abs(std::atan2(rel(1, 0), rel(0, 0)));
  } else {
    const double c = std::clamp(0.5 * (rel.trace() - 1.0), -1.0, 1.0);
    return std::acos(c);
  }
}

}  // namespace geostrain
