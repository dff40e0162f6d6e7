#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "geostrain/geodesic.hpp"
#include "geostrain/matrix.hpp"
#include "geostrain/matrix_functions.hpp"
#include "geostrain/metric.hpp"
#include "geostrain/rotation_search.hpp"
#include "geostrain/tolerances.hpp"
#include "geostrain/types.hpp"

namespace geostrain {

// right Biot-stretch tensor U = sqrt(F^T F)
template <int N>
SpdMatrix<N> stretch_tensor(const Matrix<N>& f) {
  if (!f.is_finite()) throw std::domain_error("stretch_tensor: non-finite input");
  if (!(f.det() > 0.0)) throw std::domain_error("stretch_tensor: not in GL+(n)");
  return mat_sqrt_spd(SpdMatrix<N>(f.transpose() * f));
}

enum class StrainKindTag { green, generalized_green, biot, hencky, linearized };

// One entry of the strain-measure catalogue.
class StrainMeasure {
 public:
  static StrainMeasure green() { return StrainMeasure(StrainKindTag::green, 2); }
  static StrainMeasure generalized_green(int m) {
    if (m == 0)
      throw std::invalid_argument("generalized_green: exponent must be nonzero");
    return StrainMeasure(StrainKindTag::generalized_green, m);
  }
  static StrainMeasure biot() { return StrainMeasure(StrainKindTag::biot, 1); }
  static StrainMeasure hencky() { return StrainMeasure(StrainKindTag::hencky, 1); }
  static StrainMeasure linearized() { return StrainMeasure(StrainKindTag::linearized, 1); }

  StrainKindTag tag() const { return tag_; }
  int exponent() const { return m_; }

 private:
  StrainMeasure(StrainKindTag tag, int m) : tag_(tag), m_(m) {}
  StrainKindTag tag_;
  int m_;
};

// Evaluate a strain measure. The argument is the deformation gradient F for
// the nonlinear kinds and the displacement gradient for the linearized one.
template <int N>
Matrix<N> strain_tensor(const StrainMeasure& kind, const Matrix<N>& arg) {
  const Matrix<N> id = Matrix<N>::identity();
  switch (kind.tag()) {
    case StrainKindTag::green: {
      stretch_tensor(arg);  // domain check; U^2 = F^T F exactly
      return 0.5 * (arg.transpose() * arg - id);
    }
    case StrainKindTag::generalized_green: {
      const auto u = stretch_tensor(arg);
      const double m = kind.exponent();
      return (1.0 / m) * (spd_power(u, kind.exponent()) - id);
    }
    case StrainKindTag::biot:
      return stretch_tensor(arg).matrix() - id;
    case StrainKindTag::hencky:
      return log_spd(stretch_tensor(arg));
    case StrainKindTag::linearized:
      return sym(arg);
  }
  throw std::logic_error("strain_tensor: unknown kind");
}

// squared Euclidean distance of F to SO(n): |U - 1|^2 = |F - polar(F)|^2
template <int N>
double dist_euclid_sq_to_SO(const Matrix<N>& f) {
  return frobenius_norm_sq(stretch_tensor(f).matrix() - Matrix<N>::identity());
}

// squared Euclidean distance of a displacement gradient to so(n): |sym|^2
template <int N>
double dist_euclid_sq_to_so(const Matrix<N>& grad_u) {
  return frobenius_norm_sq(sym(grad_u));
}

namespace detail {

template <int N>
struct HenckySplit {
  double dev_norm_sq;  // |dev log U|^2
  double tr_log_u;
  Matrix<N> log_u;
};

// one shared evaluation path, so every formula built on (dev log U, tr log U)
// is bitwise consistent
template <int N>
HenckySplit<N> hencky_split(const Matrix<N>& f) {
  HenckySplit<N> s;
  s.log_u = log_spd(stretch_tensor(f));
  s.tr_log_u = s.log_u.trace();
  s.dev_norm_sq = frobenius_norm_sq(dev(s.log_u));
  return s;
}

}  // namespace detail

struct HenckyEnergy {
  double value;       // mu |dev log U|^2 + (kappa/2) [tr log U]^2
  double tr_log_u;
  double log_det_f;   // equals tr log U up to roundoff
};

// Isotropic Hencky strain energy. The identity [tr log U]^2 = (log det F)^2
// is checked internally and both quantities are exposed.
template <int N>
HenckyEnergy hencky_energy(double mu, double kappa, const Matrix<N>& f) {
  if (!(mu > 0.0) || !(kappa > 0.0))
    throw std::invalid_argument("hencky_energy: moduli must be positive");
  const auto s = detail::hencky_split(f);
  HenckyEnergy e;
  e.tr_log_u = s.tr_log_u;
  e.log_det_f = std::log(f.det());
  e.value = mu * s.dev_norm_sq + 0.5 * kappa * s.tr_log_u * s.tr_log_u;
  const double lhs = e.tr_log_u * e.tr_log_u;
  const double rhs = e.log_det_f * e.log_det_f;
  if (std::abs(lhs - rhs) > tol::identity_equalities * std::max(1.0, rhs))
    throw std::runtime_error("hencky_energy: tr(log U) deviates from log det F");
  return e;
}

// quadratic Biot energy density mu |dev(U - 1)|^2 + (kappa/2) [tr(U - 1)]^2
template <int N>
double biot_energy_density(double mu, double kappa, const Matrix<N>& f) {
  if (!(mu > 0.0) || !(kappa > 0.0))
    throw std::invalid_argument("biot_energy_density: moduli must be positive");
  const Matrix<N> b = stretch_tensor(f).matrix() - Matrix<N>::identity();
  return mu * frobenius_norm_sq(dev(b)) + 0.5 * kappa * b.trace() * b.trace();
}

struct GeodesicDistSq {
  double value;
  bool mu_c_used = false;  // the closed form never reads the spin modulus
  bool pseudometric = false;
};

// Squared geodesic distance of F to SO(n) in closed form:
// mu |dev log U|^2 + (kappa/2) [tr log U]^2. The value is independent of
// mu_c by construction; the flag records that the parameter was ignored.
template <int N>
GeodesicDistSq geodesic_dist_sq_to_SO(const MetricParams& p, const Matrix<N>& f) {
  const auto s = detail::hencky_split(f);
  GeodesicDistSq d;
  d.value = p.mu * s.dev_norm_sq + 0.5 * p.kappa * s.tr_log_u * s.tr_log_u;
  d.pseudometric = p.pseudometric();
  return d;
}

template <int N>
struct LowerBoundScan {
  double value = 0.0;
  RotationMatrix<N> attained_q;
  long samples = 0;
  int skipped = 0;
  bool pseudometric = false;
};

namespace detail {

// weighted norm of the shortest real logarithm of Q F, all branches at n = 2,
// principal branch at n = 3; nullopt where no real logarithm exists
template <int N>
std::optional<double> branch_min_weighted(const MetricParams& p, const Matrix<N>& qf) {
  if constexpr (N == 2) {
    const auto branches = log_branches_2x2(qf);
    if (branches.empty()) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& xi : branches) best = std::min(best, weighted_norm_sq(p, xi));
    return best;
  } else {
    try {
      return weighted_norm_sq(p, mat_log_principal(qf));
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  }
}

}  // namespace detail

// Sampled lower bound for the squared geodesic distance to SO(n):
// min over Q of |Log(Q F)|^2 in the weighted norm, branch-enumerated at
// n = 2, principal branch plus rotation descent at n = 3.
template <int N>
LowerBoundScan<N> lower_bound_scan(const MetricParams& p, const Matrix<N>& f,
                                   long n_samples, std::uint64_t seed) {
  if (!(f.det() > 0.0)) throw std::domain_error("lower_bound_scan: not in GL+(n)");

  LowerBoundScan<N> out{0.0, RotationMatrix<N>(Matrix<N>::identity())};
  out.pseudometric = p.pseudometric();
  if constexpr (N == 2) {
    const auto objective = [&](double theta) {
      return detail::branch_min_weighted<2>(p, rot2(theta) * f);
    };
    const auto r = so2_grid_minimize(objective, n_samples);
    out.value = r.value;
    out.attained_q = RotationMatrix<2>::from_angle(r.theta);
    out.samples = r.samples;
    out.skipped = r.skipped;
  } else {
    const auto objective = [&](const Matrix<3>& q) {
      return detail::branch_min_weighted<3>(p, q * f);
    };
    const auto r = so3_sample_descent(objective, n_samples, seed);
    out.value = r.value;
    out.attained_q = RotationMatrix<3>(r.q);
    out.samples = r.samples;
    out.skipped = r.skipped;
  }
  return out;
}

struct UpperBoundResult {
  double value;           // squared length of the polar geodesic
  double endpoint_error;  // |gamma(1) - polar(F)|
  bool pseudometric = false;
};

// Upper bound for the squared geodesic distance to SO(n): the explicit
// geodesic from F with symmetric tangent -log U ends at polar(F) at t = 1;
// its squared length is |log U|^2 in the weighted norm, which coincides with
// the closed form.
template <int N>
UpperBoundResult upper_bound_via_polar_geodesic(const MetricParams& p, const Matrix<N>& f) {
  const auto factors = polar_decompose(f);
  const Matrix<N> log_u = log_spd(factors.u);
  const GeodesicSpec<N> spec(f, -1.0 * log_u, p);
  const Matrix<N> endpoint = endpoint_map(spec);

  UpperBoundResult out{weighted_norm_sq(p, log_u),
                       frobenius_norm(endpoint - factors.r.matrix())};
  out.pseudometric = p.pseudometric();
  if (out.endpoint_error > 1e-10 * std::max(1.0, frobenius_norm(factors.r.matrix())))
    throw std::runtime_error("upper_bound_via_polar_geodesic: geodesic missed polar(F)");
  const double closed = geodesic_dist_sq_to_SO(p, f).value;
  if (std::abs(out.value - closed) > tol::upper_bound_identity * std::max(1.0, closed))
    throw std::runtime_error("upper_bound_via_polar_geodesic: value deviates from closed form");
  return out;
}

template <int N>
struct Theorem1Report {
  RotationMatrix<N> q_best;
  double min_value;    // scanned min over Q of |Log(Q F)|^2, Frobenius norm
  double closed_form;  // |log U|^2
  double gap;          // min_value - closed_form, >= -1e-8 by construction
  long samples;
  int skipped;
};

// Desk-scale verifier for the rotation-optimality statement: the minimum of
// the Frobenius-norm objective |Log(Q F)|^2 over SO(n) is |log U|^2, attained
// at Q = polar(F)^T. Grid plus branch enumeration at n = 2, uniform sampling
// plus descent (principal branch) at n = 3.
template <int N>
Theorem1Report<N> verify_theorem1(const Matrix<N>& f, long n_samples, std::uint64_t seed) {
  if (!(f.det() > 0.0)) throw std::domain_error("verify_theorem1: not in GL+(n)");

  // Frobenius norm as the weighted norm with mu = mu_c = 1, kappa = 2/n
  const MetricParams frob(1.0, 1.0, 2.0 / N);
  const double closed = frobenius_norm_sq(log_spd(stretch_tensor(f)));

  RotationMatrix<N> q_best(Matrix<N>::identity());
  double min_value = 0.0;
  long samples = 0;
  int skipped = 0;
  if constexpr (N == 2) {
    const auto objective = [&](double theta) {
      return detail::branch_min_weighted<2>(frob, rot2(theta) * f);
    };
    const auto r = so2_grid_minimize(objective, n_samples);
    q_best = RotationMatrix<2>::from_angle(r.theta);
    min_value = r.value;
    samples = r.samples;
    skipped = r.skipped;
  } else {
    const auto objective = [&](const Matrix<3>& q) {
      return detail::branch_min_weighted<3>(frob, q * f);
    };
    const auto r = so3_sample_descent(objective, n_samples, seed);
    q_best = RotationMatrix<3>(r.q);
    min_value = r.value;
    samples = r.samples;
    skipped = r.skipped;
  }

  Theorem1Report<N> report{q_best, min_value, closed, min_value - closed, samples, skipped};
  if (report.gap < tol::theorem1_gap_floor)
    throw std::logic_error("verify_theorem1: scan undercut the closed form");
  return report;
}

}  // namespace geostrain
