#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "geostrain/eigen_sym.hpp"
#include "geostrain/matrix.hpp"
#include "geostrain/quadrature.hpp"
#include "geostrain/tolerances.hpp"
#include "geostrain/types.hpp"

namespace geostrain {

namespace detail {

template <int N>
double one_norm(const Matrix<N>& m) {
  double best = 0.0;
  for (int j = 0; j < N; ++j) {
    double col = 0.0;
    for (int i = 0; i < N; ++i) col += std::abs(m(i, j));
    best = std::max(best, col);
  }
  return best;
}

template <int N>
bool nearly_symmetric(const Matrix<N>& m, double rel = 1e-13) {
  return frobenius_norm(m - m.transpose()) <= rel * std::max(1.0, frobenius_norm(m));
}

// log of a symmetric matrix through its eigendecomposition
template <int N>
Matrix<N> log_sym(const Matrix<N>& m) {
  const auto e = jacobi_eigen_sym(sym(m));
  if (!(e.values[0] > 0.0))
    throw std::domain_error("eigenvalue on the closed negative real axis");
  std::array<double, N> lg;
  for (int i = 0; i < N; ++i) lg[i] = std::log(e.values[i]);
  return compose_sym(e.vectors, lg);
}

// (log(l2) - log(l1)) / (l2 - l1), stable as l2 -> l1
inline double log_divided_difference(double l1, double l2) {
  const double h = (l2 - l1) / (l2 + l1);
  if (std::abs(h) < 1e-4) {
    const double h2 = h * h;
    return 2.0 / (l1 + l2) * (1.0 + h2 / 3.0 + h2 * h2 / 5.0);
  }
  return (std::log(l2) - std::log(l1)) / (l2 - l1);
}

// principal log of a 2x2 matrix through its real normal form
inline Mat2 log_2x2_principal(const Mat2& a) {
  const double tr = a.trace(), d = a.det();
  const double disc = tr * tr - 4.0 * d;
  const double disc_tol = 1e-12 * std::max(1.0, frobenius_norm_sq(a));
  const Mat2 id = Mat2::identity();

  if (disc < -disc_tol) {
    // complex conjugate pair r e^{+-i theta}, theta in (0, pi)
    const double alpha = 0.5 * tr;
    const double beta = 0.5 * std::sqrt(-disc);
    const double theta = std::atan2(beta, alpha);
    const Mat2 k = (a - alpha * id) * (1.0 / beta);
    return 0.5 * std::log(d) * id + theta * k;
  }
  // real eigenvalues; divided-difference form covers the confluent case
  const double root = std::sqrt(std::max(disc, 0.0));
  const double l1 = 0.5 * (tr - root), l2 = 0.5 * (tr + root);
  if (!(l1 > 0.0))
    throw std::domain_error("eigenvalue on the closed negative real axis");
  return std::log(l1) * id + log_divided_difference(l1, l2) * (a - l1 * id);
}

// Square root by the coupled Denman-Beavers iteration with determinantal
// scaling; valid for any matrix without eigenvalues on the closed negative
// real axis. Symmetric input short-circuits to the eigendecomposition.
template <int N>
Matrix<N> sqrt_general(const Matrix<N>& a) {
  if (nearly_symmetric(a)) {
    const auto e = jacobi_eigen_sym(sym(a));
    if (e.values[0] > 0.0) {
      std::array<double, N> rt;
      for (int i = 0; i < N; ++i) rt[i] = std::sqrt(e.values[i]);
      return compose_sym(e.vectors, rt);
    }
  }
  Matrix<N> y = a;
  Matrix<N> z = Matrix<N>::identity();
  for (int it = 0; it < 100; ++it) {
    double g = std::pow(std::abs(y.det() * z.det()), -1.0 / (2.0 * N));
    if (!std::isfinite(g) || !(g > 0.0)) g = 1.0;
    const Matrix<N> ys = g * y, zs = g * z;
    const Matrix<N> yn = 0.5 * (ys + zs.inverse());
    const Matrix<N> zn = 0.5 * (zs + ys.inverse());
    const double step = frobenius_norm(yn - y);
    y = yn;
    z = zn;
    if (step <= 1e-14 * std::max(1.0, frobenius_norm(y))) break;
  }
  if (frobenius_norm(y * y - a) > 1e-8 * std::max(1.0, frobenius_norm(a)))
    throw std::runtime_error("matrix square root iteration did not converge");
  return y;
}

// diagonal Pade approximant of log(1 + X) in partial-fraction form,
// n_points Gauss-Legendre nodes on [0, 1]; requires |X| <= 0.25
template <int N>
Matrix<N> log_near_identity(const Matrix<N>& x) {
  static const GaussLegendreRule rule = gauss_legendre_unit(8);
  Matrix<N> sum;
  const Matrix<N> id = Matrix<N>::identity();
  for (int j = 0; j < 8; ++j)
    sum += rule.weights[j] * (x * (id + rule.nodes[j] * x).inverse());
  return sum;
}

}  // namespace detail

// Matrix exponential by scaling and squaring with the order-13 diagonal Pade
// approximant. Relative error stays near machine precision for |X| <= 20.
template <int N>
Matrix<N> mat_exp(const Matrix<N>& x) {
  if (!x.is_finite()) throw std::domain_error("mat_exp: non-finite input");
  constexpr double theta13 = 5.371920351148152;
  static constexpr double b[14] = {64764752532480000.0,
                                   32382376266240000.0,
                                   7771770303897600.0,
                                   1187353796428800.0,
                                   129060195264000.0,
                                   10559470521600.0,
                                   670442572800.0,
                                   33522128640.0,
                                   1323241920.0,
                                   40840800.0,
                                   960960.0,
                                   16380.0,
                                   182.0,
                                   1.0};
  Matrix<N> a = x;
  int s = 0;
  const double nrm = detail::one_norm(x);
  if (nrm == 0.0) return Matrix<N>::identity();
  if (nrm > theta13) {
    s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    a *= std::ldexp(1.0, -s);
  }
  const Matrix<N> id = Matrix<N>::identity();
  const Matrix<N> a2 = a * a;
  const Matrix<N> a4 = a2 * a2;
  const Matrix<N> a6 = a2 * a4;
  const Matrix<N> u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
           b[3] * a2 + b[1] * id);
  const Matrix<N> v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                      b[4] * a4 + b[2] * a2 + b[0] * id;
  Matrix<N> r = (v - u).inverse() * (v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  if (!r.is_finite()) throw std::range_error("mat_exp: overflow");
  return r;
}

// Principal matrix logarithm: the unique real logarithm whose eigenvalues
// have imaginary parts in (-pi, pi). Defined for invertible input with no
// eigenvalue on the closed negative real axis.
//
// Symmetric input goes through the eigendecomposition; 2x2 input through the
// real normal form; the remaining 3x3 case through inverse scaling and
// squaring with Denman-Beavers square roots.
template <int N>
Matrix<N> mat_log_principal(const Matrix<N>& a) {
  if (!a.is_finite()) throw std::domain_error("mat_log_principal: non-finite input");
  if (!(std::abs(a.det()) > tol::singular_det))
    throw std::domain_error("mat_log_principal: singular input");

  if (detail::nearly_symmetric(a)) return detail::log_sym(a);
  if constexpr (N == 2) {
    return detail::log_2x2_principal(a);
  } else {
    const auto sp = eigenvalues(a);
    for (int i = 0; i < sp.n_real; ++i)
      if (!(sp.real_parts[i] > 0.0))
        throw std::domain_error("eigenvalue on the closed negative real axis");

    Matrix<N> b = a;
    int k = 0;
    while (frobenius_norm(b - Matrix<N>::identity()) > 0.25) {
      if (++k > 40)
        throw std::runtime_error("mat_log_principal: square-root recursion did not converge");
      b = detail::sqrt_general(b);
    }
    return std::ldexp(1.0, k) * detail::log_near_identity(b - Matrix<N>::identity());
  }
}

// square root of a symmetric positive definite matrix
template <int N>
SpdMatrix<N> mat_sqrt_spd(const SpdMatrix<N>& s) {
  const auto e = jacobi_eigen_sym(s.matrix());
  std::array<double, N> rt;
  for (int i = 0; i < N; ++i) rt[i] = std::sqrt(e.values[i]);
  return SpdMatrix<N>(compose_sym(e.vectors, rt));
}

// log of a symmetric positive definite matrix
template <int N>
Matrix<N> log_spd(const SpdMatrix<N>& s) {
  return detail::log_sym(s.matrix());
}

// integer power of a symmetric positive definite matrix (m may be negative)
template <int N>
Matrix<N> spd_power(const SpdMatrix<N>& s, int m) {
  const auto e = jacobi_eigen_sym(s.matrix());
  std::array<double, N> pw;
  for (int i = 0; i < N; ++i) pw[i] = std::pow(e.values[i], m);
  return compose_sym(e.vectors, pw);
}

// Polar decomposition F = R U by the scaled Newton iteration
// X <- (mu X + mu^-1 X^-T) / 2, with an eigendecomposition of F^T F as the
// fallback when the iteration stalls. Requires det F > 0.
template <int N>
PolarFactors<N> polar_decompose(const Matrix<N>& f) {
  if (!f.is_finite()) throw std::domain_error("polar_decompose: non-finite input");
  if (!(f.det() > 0.0)) throw std::domain_error("polar_decompose: not in GL+(n)");

  Matrix<N> x = f;
  bool converged = false;
  for (int it = 0; it < tol::polar_newton_max_iter; ++it) {
    const double mu = std::pow(std::abs(x.det()), -1.0 / N);
    const Matrix<N> next = 0.5 * (mu * x + (1.0 / mu) * x.inverse().transpose());
    const double step = frobenius_norm(next - x);
    x = next;
    if (step <= tol::polar_newton_step * frobenius_norm(x)) {
      converged = true;
      break;
    }
  }
  if (!converged ||
      frobenius_norm(x.transpose() * x - Matrix<N>::identity()) >
          tol::rotation_orthogonality) {
    const auto e = jacobi_eigen_sym(f.transpose() * f);
    if (!(e.values[0] > 0.0))
      throw std::domain_error("polar_decompose: rank-deficient input");
    std::array<double, N> inv_rt;
    for (int i = 0; i < N; ++i) inv_rt[i] = 1.0 / std::sqrt(e.values[i]);
    x = f * compose_sym(e.vectors, inv_rt);
    for (int i = 0; i < 3; ++i) x = 0.5 * (x + x.inverse().transpose());
  }

  PolarFactors<N> out{RotationMatrix<N>(x),
                      SpdMatrix<N>(sym(x.transpose() * f))};
  out.condition_warning = out.u.condition() > 1e8;
  const double residual =
      frobenius_norm(out.r.matrix() * out.u.matrix() - f);
  if (residual > tol::polar_factor_residual * std::max(1.0, frobenius_norm(f)))
    throw std::runtime_error("polar_decompose: factor residual out of tolerance");
  return out;
}

// All real logarithms of a 2x2 matrix with positive determinant that arise
// from shifting the rotation angle of its normal form by 2 pi k, |k| <= k_max.
// The principal logarithm, when it exists, comes first. Matrices whose real
// eigenvalues are negative and distinct (or defective) have no real
// logarithm and yield an empty list.
inline std::vector<Mat2> log_branches_2x2(const Mat2& a,
                                          int k_max = tol::log_branch_default_k_max) {
  if (!a.is_finite()) throw std::domain_error("log_branches_2x2: non-finite input");
  if (!(a.det() > 0.0)) throw std::domain_error("log_branches_2x2: det must be positive");
  if (k_max < 0) throw std::invalid_argument("log_branches_2x2: k_max must be >= 0");

  constexpr double two_pi = 6.283185307179586;
  const Mat2 id = Mat2::identity();
  const Mat2 j = mat2(0.0, -1.0, 1.0, 0.0);
  const double tr = a.trace(), d = a.det();
  const double disc = tr * tr - 4.0 * d;
  const double disc_tol = 1e-12 * std::max(1.0, frobenius_norm_sq(a));

  std::vector<Mat2> out;
  const auto angles_from = [&](double base, const Mat2& gen, double log_radius) {
    for (int k = 0; k <= k_max; ++k) {
      out.push_back(log_radius * id + (base + two_pi * k) * gen);
      if (k > 0) out.push_back(log_radius * id + (base - two_pi * k) * gen);
    }
  };

  if (disc < -disc_tol) {
    // rotation-scaling normal form r e^{+-i theta}, theta in (0, pi)
    const double alpha = 0.5 * tr;
    const double beta = 0.5 * std::sqrt(-disc);
    const double theta = std::atan2(beta, alpha);
    const Mat2 k = (a - alpha * id) * (1.0 / beta);
    angles_from(theta, k, 0.5 * std::log(d));
  } else if (disc > disc_tol) {
    const double root = std::sqrt(disc);
    const double l1 = 0.5 * (tr - root), l2 = 0.5 * (tr + root);
    // distinct positive eigenvalues admit exactly the principal branch;
    // distinct negative ones admit no real logarithm at all
    if (l1 > 0.0)
      out.push_back(std::log(l1) * id +
                    detail::log_divided_difference(l1, l2) * (a - l1 * id));
  } else {
    const double l = 0.5 * tr;
    const Mat2 nil = a - l * id;
    const bool scalar = frobenius_norm(nil) <= 1e-12 * std::max(1.0, std::abs(l));
    if (scalar) {
      // conjugation-normal form is |l| Rot(0) or |l| Rot(pi); shift by 2 pi k
      angles_from(l > 0.0 ? 0.0 : M_PI, j, std::log(std::abs(l)));
    } else if (l > 0.0) {
      out.push_back(std::log(l) * id + nil * (1.0 / l));
    }
    // defective with negative eigenvalue: no real logarithm
  }
  return out;
}

}  // namespace geostrain
