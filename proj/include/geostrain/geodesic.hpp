#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geostrain/matrix.hpp"
#include "geostrain/matrix_functions.hpp"
#include "geostrain/metric.hpp"
#include "geostrain/quadrature.hpp"
#include "geostrain/random.hpp"
#include "geostrain/tolerances.hpp"

namespace geostrain {

// Base point, tangent parameter and metric weights; together they fix the
// curve
//   gamma(t) = F exp(t (sym xi - (mu_c/mu) skew xi)) exp(t (1 + mu_c/mu) skew xi),
// which is the general form of a geodesic through F for the left-invariant
// isotropic metric.
template <int N>
struct GeodesicSpec {
  Matrix<N> base;
  Matrix<N> xi;
  MetricParams params;

  GeodesicSpec(const Matrix<N>& base_, const Matrix<N>& xi_, const MetricParams& params_)
      : base(base_), xi(xi_), params(params_) {
    if (!base.is_finite() || !xi.is_finite())
      throw std::domain_error("GeodesicSpec: non-finite entries");
    if (!(base.det() > 0.0)) throw std::domain_error("GeodesicSpec: base not in GL+(n)");
  }

  // argument of the first exponential factor, sym xi - (mu_c/mu) skew xi
  Matrix<N> stretch_generator() const {
    return sym(xi) - (params.mu_c / params.mu) * skew(xi);
  }
  // argument of the second factor, (1 + mu_c/mu) skew xi
  Matrix<N> spin_generator() const {
    return (1.0 + params.mu_c / params.mu) * skew(xi);
  }
};

template <int N>
Matrix<N> geodesic_point(const GeodesicSpec<N>& spec, double t) {
  return spec.base * mat_exp(Matrix<N>(t * spec.stretch_generator())) *
         mat_exp(Matrix<N>(t * spec.spin_generator()));
}

// analytic time derivative of geodesic_point
template <int N>
Matrix<N> geodesic_velocity(const GeodesicSpec<N>& spec, double t) {
  const Matrix<N> a = spec.stretch_generator();
  const Matrix<N> b = spec.spin_generator();
  const Matrix<N> ea = mat_exp(Matrix<N>(t * a));
  const Matrix<N> eb = mat_exp(Matrix<N>(t * b));
  return spec.base * (a * ea * eb + ea * eb * b);
}

// speed in the metric, sqrt(g_gamma(gamma', gamma'))
template <int N>
double geodesic_speed(const GeodesicSpec<N>& spec, double t) {
  const Matrix<N> g = geodesic_point(spec, t);
  const Matrix<N> v = geodesic_velocity(spec, t);
  return std::sqrt(weighted_norm_sq(spec.params, g.inverse() * v));
}

template <int N>
Matrix<N> endpoint_map(const GeodesicSpec<N>& spec) {
  return geodesic_point(spec, 1.0);
}

// Length of an arbitrary curve given by point and velocity callables:
// composite Gauss-Legendre of order 16, panel count doubling until two
// successive refinements agree to 1e-10 relative (or the panel cap is hit).
// Sample points must stay in GL+(n).
template <int N>
double curve_length(const MetricParams& p,
                    const std::function<Matrix<N>(double)>& point,
                    const std::function<Matrix<N>(double)>& velocity,
                    double t0, double t1) {
  static const GaussLegendreRule rule = gauss_legendre(tol::quadrature_order);

  const auto speed = [&](double t) {
    const Matrix<N> g = point(t);
    if (!(g.det() > 0.0))
      throw std::domain_error("curve_length: sample point left GL+(n)");
    return std::sqrt(weighted_norm_sq(p, g.inverse() * velocity(t)));
  };

  const auto composite = [&](int panels) {
    double sum = 0.0;
    const double h = (t1 - t0) / panels;
    for (int k = 0; k < panels; ++k) {
      const double mid = t0 + (k + 0.5) * h;
      double panel = 0.0;
      for (int i = 0; i < tol::quadrature_order; ++i)
        panel += rule.weights[i] * speed(mid + 0.5 * h * rule.nodes[i]);
      sum += 0.5 * h * panel;
    }
    return sum;
  };

  double prev = composite(1);
  for (int panels = 2; panels <= tol::quadrature_max_panels; panels *= 2) {
    const double next = composite(panels);
    const double diff = std::abs(next - prev);
    prev = next;
    if (diff <= tol::quadrature_rel * std::max(std::abs(next), 1e-30)) break;
  }
  return prev;
}

template <int N>
double curve_length(const GeodesicSpec<N>& spec, double t0, double t1) {
  return curve_length<N>(
      spec.params, [&](double t) { return geodesic_point(spec, t); },
      [&](double t) { return geodesic_velocity(spec, t); }, t0, t1);
}

// Length of the piecewise-linear curve through equally spaced samples over
// [t0, t1]; every segment is integrated on its own to keep the quadrature
// away from the velocity kinks at the knots.
template <int N>
double curve_length(const MetricParams& p, const std::vector<Matrix<N>>& samples,
                    double t0, double t1) {
  if (samples.size() < 2)
    throw std::invalid_argument("curve_length: need at least two samples");
  const double dt = (t1 - t0) / static_cast<double>(samples.size() - 1);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const Matrix<N>& a = samples[k];
    const Matrix<N> step = samples[k + 1] - a;
    const Matrix<N> velocity = (1.0 / dt) * step;
    total += curve_length<N>(
        p, [&](double t) { return Matrix<N>(a + ((t - t0) / dt - k) * step); },
        [&](double) { return velocity; }, t0 + k * dt, t0 + (k + 1) * dt);
  }
  return total;
}

template <int N>
struct EndpointSolveReport {
  Matrix<N> xi;
  double residual = 0.0;  // Frobenius norm of gamma(1) - P
  int iterations = 0;
  bool converged = false;
  double length = 0.0;  // weighted_norm(p, xi)
  bool pseudometric = false;
};

namespace detail {

// dense solve with partial pivoting, for the M x M normal equations
template <int M>
std::array<double, M> solve_dense(std::array<double, M * M> a, std::array<double, M> b) {
  for (int col = 0; col < M; ++col) {
    int piv = col;
    for (int r = col + 1; r < M; ++r)
      if (std::abs(a[r * M + col]) > std::abs(a[piv * M + col])) piv = r;
    if (std::abs(a[piv * M + col]) < 1e-300)
      throw std::runtime_error("solve_dense: singular system");
    if (piv != col) {
      for (int c = 0; c < M; ++c) std::swap(a[col * M + c], a[piv * M + c]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < M; ++r) {
      const double f = a[r * M + col] / a[col * M + col];
      for (int c = col; c < M; ++c) a[r * M + c] -= f * a[col * M + c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, M> x{};
  for (int r = M - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < M; ++c) s -= a[r * M + c] * x[c];
    x[r] = s / a[r * M + r];
  }
  return x;
}

}  // namespace detail

// Solve the endpoint equation P = gamma(1) for the tangent parameter xi by
// damped least squares on the flattened residual, with the Jacobian taken by
// central finite differences. Non-convergence is reported, not thrown; the
// returned xi is a solution, with no global length-minimality claim.
template <int N>
EndpointSolveReport<N> solve_endpoint(const MetricParams& p, const Matrix<N>& f,
                                      const Matrix<N>& target,
                                      std::optional<Matrix<N>> init = std::nullopt,
                                      int max_iter = tol::lm_max_iter) {
  if (!(f.det() > 0.0)) throw std::domain_error("solve_endpoint: F not in GL+(n)");
  if (!(target.det() > 0.0)) throw std::domain_error("solve_endpoint: P not in GL+(n)");

  constexpr int M = N * N;
  const double tolerance = tol::endpoint_residual * std::max(1.0, frobenius_norm(target));

  Matrix<N> xi;
  if (init) {
    xi = *init;
  } else {
    try {
      xi = mat_log_principal(Matrix<N>(f.inverse() * target));
    } catch (const std::exception&) {
      xi = Matrix<N>::zero();
    }
  }

  const auto residual_of = [&](const Matrix<N>& x) {
    return Matrix<N>(endpoint_map(GeodesicSpec<N>(f, x, p)) - target);
  };

  Matrix<N> res = residual_of(xi);
  double res_norm = frobenius_norm(res);
  double damping = tol::lm_initial_damping;
  int iterations = 0;

  while (iterations < max_iter && res_norm > tolerance) {
    ++iterations;
    // Jacobian by central differences
    std::array<std::array<double, M>, M> jac;  // jac[col] = d residual / d xi_col
    for (int c = 0; c < M; ++c) {
      Matrix<N> plus = xi, minus = xi;
      plus.a[c] += tol::lm_fd_step;
      minus.a[c] -= tol::lm_fd_step;
      const Matrix<N> rp = residual_of(plus), rm = residual_of(minus);
      for (int r = 0; r < M; ++r)
        jac[c][r] = (rp.a[r] - rm.a[r]) / (2.0 * tol::lm_fd_step);
    }
    std::array<double, M * M> jtj{};
    std::array<double, M> jtr{};
    for (int i = 0; i < M; ++i) {
      for (int jj = 0; jj < M; ++jj) {
        double s = 0.0;
        for (int r = 0; r < M; ++r) s += jac[i][r] * jac[jj][r];
        jtj[i * M + jj] = s;
      }
      double s = 0.0;
      for (int r = 0; r < M; ++r) s += jac[i][r] * res.a[r];
      jtr[i] = s;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      std::array<double, M * M> lhs = jtj;
      for (int i = 0; i < M; ++i) lhs[i * M + i] += damping;
      std::array<double, M> rhs;
      for (int i = 0; i < M; ++i) rhs[i] = -jtr[i];
      std::array<double, M> delta;
      try {
        delta = detail::solve_dense<M>(lhs, rhs);
      } catch (const std::runtime_error&) {
        damping *= 10.0;
        continue;
      }
      Matrix<N> trial = xi;
      for (int i = 0; i < M; ++i) trial.a[i] += delta[i];
      Matrix<N> trial_res;
      double trial_norm;
      try {
        trial_res = residual_of(trial);
        trial_norm = frobenius_norm(trial_res);
      } catch (const std::exception&) {
        damping *= 10.0;
        continue;
      }
      if (trial_norm < res_norm) {
        xi = trial;
        res = trial_res;
        res_norm = trial_norm;
        damping = std::max(damping * 0.3, 1e-14);
        accepted = true;
        break;
      }
      damping *= 10.0;
      if (damping > 1e14) break;
    }
    if (!accepted) break;  // stagnated
  }

  EndpointSolveReport<N> report;
  report.xi = xi;
  report.residual = res_norm;
  report.iterations = iterations;
  report.converged = res_norm <= tolerance;
  report.length = weighted_norm(p, xi);
  report.pseudometric = p.pseudometric();
  return report;
}

template <int N>
struct DistanceEstimate {
  double value = 0.0;  // min over converged starts of weighted_norm(p, xi)
  EndpointSolveReport<N> best;
  std::vector<EndpointSolveReport<N>> reports;  // all candidates, start order
  bool pseudometric = false;
};

// thrown when no multistart run converges; carries every report
template <int N>
struct EndpointSolveFailure : std::runtime_error {
  std::vector<EndpointSolveReport<N>> reports;
  explicit EndpointSolveFailure(std::vector<EndpointSolveReport<N>> r)
      : std::runtime_error("geodesic_distance_estimate: no start converged"),
        reports(std::move(r)) {}
};

// Upper estimate of the geodesic distance from F to P: the best converged
// multistart solve of the endpoint equation. Start k is independent of
// n_starts, so the estimate is monotone nonincreasing in n_starts for a
// fixed seed.
template <int N>
DistanceEstimate<N> geodesic_distance_estimate(const MetricParams& p, const Matrix<N>& f,
                                               const Matrix<N>& target, int n_starts,
                                               std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
  if (n_starts < 1) throw std::invalid_argument("geodesic_distance_estimate: n_starts >= 1");
  if (!(f.det() > 0.0) || !(target.det() > 0.0))
    throw std::domain_error("geodesic_distance_estimate: endpoints must lie in GL+(n)");

  std::optional<Matrix<N>> principal;
  try {
    principal = mat_log_principal(Matrix<N>(f.inverse() * target));
  } catch (const std::exception&) {
  }

  std::vector<Matrix<N>> starts;
  starts.reserve(n_starts);
  starts.push_back(principal.value_or(Matrix<N>::zero()));
  if constexpr (N == 2) {
    // branch-shifted logarithms of F^-1 P, skipping the principal one
    try {
      const auto branches = log_branches_2x2(Mat2(f.inverse() * target));
      for (std::size_t i = (principal ? 1u : 0u);
           i < branches.size() && starts.size() < static_cast<std::size_t>(n_starts); ++i)
        starts.push_back(branches[i]);
    } catch (const std::exception&) {
    }
  }
  const Matrix<N> anchor = starts.front();
  for (int k = static_cast<int>(starts.size()); k < n_starts; ++k) {
    Rng rng(seed + static_cast<std::uint64_t>(k));
    Matrix<N> perturbed = anchor;
    for (double& v : perturbed.a) v += 0.5 * rng.normal();
    starts.push_back(perturbed);
  }
  starts.resize(n_starts, anchor);

  DistanceEstimate<N> estimate;
  estimate.pseudometric = p.pseudometric();
  bool found = false;
  for (const Matrix<N>& start : starts) {
    auto report = solve_endpoint(p, f, target, std::optional<Matrix<N>>(start));
    estimate.reports.push_back(report);
    if (report.converged && (!found || report.length < estimate.value)) {
      estimate.value = report.length;
      estimate.best = report;
      found = true;
    }
  }
  if (!found) throw EndpointSolveFailure<N>(std::move(estimate.reports));
  return estimate;
}

}  // namespace geostrain
