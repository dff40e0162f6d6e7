#pragma once

#include <cmath>
#include <stdexcept>

#include "geostrain/matrix.hpp"
#include "geostrain/tolerances.hpp"

namespace geostrain {

// The three weights (mu, mu_c, kappa) of the isotropic inner product on
// gl(n). mu_c = 0 is admitted but degrades the induced distance to a
// pseudometric; operations that consume the parameters surface that flag in
// their result metadata.
struct MetricParams {
  double mu;
  double mu_c;
  double kappa;

  MetricParams(double mu_, double mu_c_, double kappa_)
      : mu(mu_), mu_c(mu_c_), kappa(kappa_) {
    if (!(mu > 0.0)) throw std::invalid_argument("MetricParams: mu must be > 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("MetricParams: kappa must be > 0");
    if (!(mu_c >= 0.0)) throw std::invalid_argument("MetricParams: mu_c must be >= 0");
  }

  bool pseudometric() const { return mu_c == 0.0; }
};

// mu <dev sym X, dev sym Y> + mu_c <skew X, skew Y> + (kappa/2) tr X tr Y
template <int N>
double weighted_inner(const MetricParams& p, const Matrix<N>& x, const Matrix<N>& y) {
  const auto px = orthogonal_parts(x);
  const auto py = orthogonal_parts(y);
  return p.mu * frobenius_inner(px.devsym, py.devsym) +
         p.mu_c * frobenius_inner(px.skw, py.skw) +
         0.5 * p.kappa * x.trace() * y.trace();
}

template <int N>
double weighted_norm_sq(const MetricParams& p, const Matrix<N>& x) {
  const auto parts = orthogonal_parts(x);
  const double tr = x.trace();
  return p.mu * frobenius_norm_sq(parts.devsym) +
         p.mu_c * frobenius_norm_sq(parts.skw) + 0.5 * p.kappa * tr * tr;
}

template <int N>
double weighted_norm(const MetricParams& p, const Matrix<N>& x) {
  return std::sqrt(weighted_norm_sq(p, x));
}

// left-invariant metric tensor g_H(X, Y) = <H^-1 X, H^-1 Y>
template <int N>
double riemannian_metric_at(const MetricParams& p, const Matrix<N>& h,
                            const Matrix<N>& x, const Matrix<N>& y) {
  const Matrix<N> hi = h.inverse(tol::metric_inverse_det);
  return weighted_inner(p, hi * x, hi * y);
}

}  // namespace geostrain
