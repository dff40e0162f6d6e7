#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "geostrain/matrix.hpp"

namespace geostrain {

template <int N>
struct SymEigen {
  Matrix<N> vectors;               // orthonormal eigenvectors, one per column
  std::array<double, N> values;    // ascending
};

// Cyclic Jacobi for symmetric input. At these shapes it reaches machine
// precision in a handful of sweeps and never needs pivoting heuristics.
template <int N>
SymEigen<N> jacobi_eigen_sym(const Matrix<N>& s, int max_sweeps = 50) {
  Matrix<N> a = s;
  Matrix<N> v = Matrix<N>::identity();
  const double scale = std::max(1.0, frobenius_norm(a));

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += std::abs(a(p, q));
    if (off <= 1e-15 * scale) break;

    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        if (a(p, q) == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        // rows/columns p and q of a, columns of v
        for (int k = 0; k < N; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (int k = 0; k < N; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  SymEigen<N> e;
  std::array<int, N> order;
  for (int i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i) < a(j, j); });
  for (int i = 0; i < N; ++i) {
    e.values[i] = a(order[i], order[i]);
    for (int k = 0; k < N; ++k) e.vectors(k, i) = v(k, order[i]);
  }
  return e;
}

// V diag(d) V^T
template <int N>
Matrix<N> compose_sym(const Matrix<N>& v,
                      const std::array<double, static_cast<std::size_t>(N)>& d) {
  Matrix<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double s = 0.0;
      for (int k = 0; k < N; ++k) s += v(i, k) * d[k] * v(j, k);
      r(i, j) = s;
    }
  return r;
}

// Eigenvalues of the (possibly nonsymmetric) input, real or as a conjugate
// pair, from the characteristic polynomial. Used for principal-log domain
// checks, not for function evaluation.
template <int N>
struct Spectrum {
  int n_real = 0;
  std::array<double, N> real_parts{};  // real eigenvalues, first n_real slots
  bool has_complex_pair = false;
  double pair_re = 0.0;
  double pair_im = 0.0;  // positive half of the pair
};

inline Spectrum<2> eigenvalues(const Mat2& m) {
  Spectrum<2> s;
  const double tr = m.trace(), d = m.det();
  const double disc = tr * tr - 4.0 * d;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    s.n_real = 2;
    s.real_parts = {0.5 * (tr - r), 0.5 * (tr + r)};
  } else {
    s.has_complex_pair = true;
    s.pair_re = 0.5 * tr;
    s.pair_im = 0.5 * std::sqrt(-disc);
  }
  return s;
}

inline Spectrum<3> eigenvalues(const Mat3& m) {
  // roots of lambda^3 - c2 lambda^2 + c1 lambda - c0
  const double c2 = m.trace();
  const double c0 = m.det();
  const double tr_sq = (m * m).trace();
  const double c1 = 0.5 * (c2 * c2 - tr_sq);

  // depressed form t^3 + p t + q with lambda = t + c2/3
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -c0 + c1 * shift - 2.0 * c2 * c2 * c2 / 27.0;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;

  Spectrum<3> s;
  if (disc > 0.0) {
    // one real root, one conjugate pair
    const double r = std::sqrt(disc);
    const double u = std::cbrt(-half_q + r);
    const double w = std::cbrt(-half_q - r);
    const double t0 = u + w;
    s.n_real = 1;
    s.real_parts[0] = t0 + shift;
    s.has_complex_pair = true;
    s.pair_re = -0.5 * t0 + shift;
    s.pair_im = 0.5 * std::sqrt(3.0) * std::abs(u - w);
  } else {
    // three real roots (trigonometric form)
    s.n_real = 3;
    if (third_p == 0.0) {
      s.real_parts = {shift, shift, shift};
    } else {
      const double rho = std::sqrt(-third_p);
      double cos_arg = -half_q / (rho * rho * rho);
      cos_arg = std::clamp(cos_arg, -1.0, 1.0);
      const double phi = std::acos(cos_arg) / 3.0;
      constexpr double two_thirds_pi = 2.0943951023931953;
      for (int k = 0; k < 3; ++k)
        s.real_parts[k] = 2.0 * rho * std::cos(phi - k * two_thirds_pi) + shift;
      std::sort(s.real_parts.begin(), s.real_parts.end());
    }
  }
  return s;
}

// true when some eigenvalue sits on the closed negative real axis
// (principal logarithm undefined there)
template <int N>
bool has_nonpositive_real_eigenvalue(const Matrix<N>& m, double zero_tol = 0.0) {
  const auto s = eigenvalues(m);
  for (int i = 0; i < s.n_real; ++i)
    if (s.real_parts[i] <= zero_tol) return true;
  return false;
}

}  // namespace geostrain
