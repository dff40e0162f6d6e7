#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "geostrain/matrix.hpp"
#include "geostrain/matrix_functions.hpp"
#include "geostrain/random.hpp"
#include "geostrain/tolerances.hpp"
#include "geostrain/types.hpp"

namespace geostrain {

// Minimization of a smooth objective over SO(2) and SO(3). Objectives return
// nullopt where they are undefined (log-branch boundaries); such samples are
// skipped and counted, never perturbed.

struct So2SearchResult {
  double theta = 0.0;
  double value = 0.0;
  int skipped = 0;
  long samples = 0;
};

namespace detail {

inline double eval_or_inf(const std::function<std::optional<double>(double)>& f, double t) {
  const auto v = f(t);
  return v ? *v : std::numeric_limits<double>::infinity();
}

// golden-section minimization on [lo, hi]
inline double golden_section(const std::function<std::optional<double>(double)>& f,
                             double lo, double hi, double theta_tol = 1e-12) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = eval_or_inf(f, x1), f2 = eval_or_inf(f, x2);
  for (int it = 0; it < 200 && (b - a) > theta_tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = eval_or_inf(f, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = eval_or_inf(f, x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Uniform angle grid over [0, 2 pi) followed by golden-section refinement
// around the best grid point.
inline So2SearchResult so2_grid_minimize(const std::function<std::optional<double>(double)>& objective,
                                         long n_samples, bool refine = true) {
  if (n_samples < 1) throw std::invalid_argument("so2_grid_minimize: n_samples >= 1");
  So2SearchResult best;
  best.samples = n_samples;
  best.value = std::numeric_limits<double>::infinity();
  const double step = 2.0 * M_PI / static_cast<double>(n_samples);
  for (long i = 0; i < n_samples; ++i) {
    const double theta = step * static_cast<double>(i);
    const auto v = objective(theta);
    if (!v) {
      ++best.skipped;
      continue;
    }
    if (*v < best.value) {
      best.value = *v;
      best.theta = theta;
    }
  }
  if (!std::isfinite(best.value))
    throw std::domain_error("so2_grid_minimize: objective undefined on the whole grid");
  if (refine) {
    const double t = detail::golden_section(objective, best.theta - step, best.theta + step);
    const auto v = objective(t);
    if (v && *v < best.value) {
      best.value = *v;
      best.theta = t;
    }
  }
  return best;
}

struct So3SearchResult {
  Matrix<3> q = Matrix<3>::identity();
  double value = 0.0;
  int skipped = 0;
  long samples = 0;
  int descent_iterations = 0;
};

namespace detail {

// projected gradient descent along SO(3) geodesics with Armijo backtracking
inline void so3_descend(const std::function<std::optional<double>(const Matrix<3>&)>& objective,
                        Mat3& q, double& fq, int max_iter, int& iterations) {
  // so(3) basis for the left-trivialized gradient
  const Mat3 e1 = mat3(0, 0, 0, 0, 0, -1, 0, 1, 0);
  const Mat3 e2 = mat3(0, 0, 1, 0, 0, 0, -1, 0, 0);
  const Mat3 e3 = mat3(0, -1, 0, 1, 0, 0, 0, 0, 0);
  const std::array<Mat3, 3> basis{e1, e2, e3};

  const auto value_at = [&](const Mat3& candidate) -> double {
    const auto v = objective(candidate);
    return v ? *v : std::numeric_limits<double>::infinity();
  };

  const double h = 1e-6;
  for (int it = 0; it < max_iter; ++it) {
    ++iterations;
    std::array<double, 3> grad;
    double gnorm_sq = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Mat3 qp = mat_exp(Mat3(h * basis[k])) * q;
      const Mat3 qm = mat_exp(Mat3(-h * basis[k])) * q;
      grad[k] = (value_at(qp) - value_at(qm)) / (2.0 * h);
      if (!std::isfinite(grad[k])) grad[k] = 0.0;
      gnorm_sq += grad[k] * grad[k];
    }
    if (gnorm_sq <= 1e-24 * std::max(1.0, fq * fq)) break;

    Mat3 w;
    for (int k = 0; k < 3; ++k) w += grad[k] * basis[k];

    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 50; ++bt) {
      const Mat3 trial = mat_exp(Mat3(-alpha * w)) * q;
      const double ft = value_at(trial);
      if (ft <= fq - 1e-4 * alpha * gnorm_sq) {
        q = trial;
        fq = ft;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
  }
}

// Damped Newton polish on the local chart w -> f(exp(w . E) q). Plain
// gradient steps stall in the narrow curved valleys of the weighted
// objectives; the finite-difference Newton step follows them to the floor.
inline void so3_newton_polish(
    const std::function<std::optional<double>(const Matrix<3>&)>& objective,
    Mat3& q, double& fq, int max_iter = 40) {
  const Mat3 e1 = mat3(0, 0, 0, 0, 0, -1, 0, 1, 0);
  const Mat3 e2 = mat3(0, 0, 1, 0, 0, 0, -1, 0, 0);
  const Mat3 e3 = mat3(0, -1, 0, 1, 0, 0, 0, 0, 0);
  const std::array<Mat3, 3> basis{e1, e2, e3};

  const auto value_at = [&](const Mat3& candidate) -> double {
    const auto v = objective(candidate);
    return v ? *v : std::numeric_limits<double>::infinity();
  };
  const auto chart = [&](double a, int i, double b, int j) {
    return value_at(mat_exp(Mat3(a * basis[i] + b * basis[j])) * q);
  };

  const double h = 1e-4;
  for (int it = 0; it < max_iter; ++it) {
    std::array<double, 3> fp, fm, grad;
    for (int k = 0; k < 3; ++k) {
      fp[k] = chart(h, k, 0.0, k);
      fm[k] = chart(-h, k, 0.0, k);
      grad[k] = (fp[k] - fm[k]) / (2.0 * h);
      if (!std::isfinite(grad[k])) return;
    }
    std::array<double, 9> hess;
    for (int k = 0; k < 3; ++k)
      hess[k * 3 + k] = (fp[k] - 2.0 * fq + fm[k]) / (h * h);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double cross = (chart(h, i, h, j) - chart(h, i, -h, j) -
                              chart(-h, i, h, j) + chart(-h, i, -h, j)) /
                             (4.0 * h * h);
        hess[i * 3 + j] = hess[j * 3 + i] = cross;
      }
    if (!std::isfinite(hess[0]) || !std::isfinite(hess[4]) || !std::isfinite(hess[8]))
      return;

    double damping = 0.0;
    bool moved = false;
    for (int attempt = 0; attempt < 12 && !moved; ++attempt) {
      std::array<double, 9> lhs = hess;
      for (int k = 0; k < 3; ++k) lhs[k * 3 + k] += damping;
      std::array<double, 3> step;
      bool solved = true;
      {
        // tiny 3x3 solve with partial pivoting
        std::array<double, 9> a = lhs;
        std::array<double, 3> b{-grad[0], -grad[1], -grad[2]};
        for (int col = 0; col < 3 && solved; ++col) {
          int piv = col;
          for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r * 3 + col]) > std::abs(a[piv * 3 + col])) piv = r;
          if (std::abs(a[piv * 3 + col]) < 1e-300) {
            solved = false;
            break;
          }
          if (piv != col) {
            for (int c = 0; c < 3; ++c) std::swap(a[col * 3 + c], a[piv * 3 + c]);
            std::swap(b[col], b[piv]);
          }
          for (int r = col + 1; r < 3; ++r) {
            const double fctr = a[r * 3 + col] / a[col * 3 + col];
            for (int c = col; c < 3; ++c) a[r * 3 + c] -= fctr * a[col * 3 + c];
            b[r] -= fctr * b[col];
          }
        }
        if (solved) {
          for (int r = 2; r >= 0; --r) {
            double s = b[r];
            for (int c = r + 1; c < 3; ++c) s -= a[r * 3 + c] * step[c];
            step[r] = s / a[r * 3 + r];
          }
        }
      }
      if (!solved) {
        damping = (damping == 0.0) ? 1e-6 : damping * 10.0;
        continue;
      }
      const Mat3 trial =
          mat_exp(Mat3(step[0] * basis[0] + step[1] * basis[1] + step[2] * basis[2])) * q;
      const double ft = value_at(trial);
      if (ft < fq) {
        q = trial;
        fq = ft;
        moved = true;
      } else {
        damping = (damping == 0.0) ? 1e-6 : damping * 10.0;
      }
    }
    if (!moved) return;
  }
}

}  // namespace detail

// Uniform rotation sampling (normalized 4-vector directions) followed by
// projected gradient descent along geodesics of SO(3) with Armijo
// backtracking. Descents start from the best few samples, which guards
// against basins of attraction away from the global minimum.
inline So3SearchResult so3_sample_descent(
    const std::function<std::optional<double>(const Matrix<3>&)>& objective,
    long n_samples, std::uint64_t seed,
    int max_descent_iter = tol::so3_descent_max_iter, int descent_starts = 4) {
  if (n_samples < 1) throw std::invalid_argument("so3_sample_descent: n_samples >= 1");

  Rng rng(seed);
  So3SearchResult best;
  best.samples = n_samples;
  best.value = std::numeric_limits<double>::infinity();

  std::vector<std::pair<double, Mat3>> leaders;  // ascending by value
  for (long i = 0; i < n_samples; ++i) {
    const Matrix<3> q = random_rotation<3>(rng).matrix();
    const auto v = objective(q);
    if (!v) {
      ++best.skipped;
      continue;
    }
    const auto at = std::upper_bound(
        leaders.begin(), leaders.end(), *v,
        [](double value, const auto& entry) { return value < entry.first; });
    leaders.insert(at, {*v, q});
    if (leaders.size() > static_cast<std::size_t>(descent_starts)) leaders.pop_back();
  }
  if (leaders.empty())
    throw std::domain_error("so3_sample_descent: objective undefined at every sample");

  bool first = true;
  for (auto& [value, q] : leaders) {
    detail::so3_descend(objective, q, value, max_descent_iter, best.descent_iterations);
    detail::so3_newton_polish(objective, q, value);
    if (first || value < best.value) {
      best.value = value;
      best.q = q;
      first = false;
    }
  }
  return best;
}

}  // namespace geostrain
