#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "geostrain/matrix.hpp"
#include "geostrain/types.hpp"

namespace geostrain {

// Seeded generator with explicit double conversions, so a fixed seed yields
// the same stream on every platform.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  // uniform in [0, 1)
  double uniform() { return (engine() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal (Box-Muller, two draws per call)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

// Haar-uniform rotation
template <int N>
RotationMatrix<N> random_rotation(Rng& rng) {
  if constexpr (N == 2) {
    return RotationMatrix<2>::from_angle(rng.uniform(0.0, 2.0 * M_PI));
  } else {
    double w, x, y, z, n2;
    do {
      w = rng.normal();
      x = rng.normal();
      y = rng.normal();
      z = rng.normal();
      n2 = w * w + x * x + y * y + z * z;
    } while (n2 < 1e-12);
    return RotationMatrix<3>::from_quaternion(w, x, y, z);
  }
}

template <int N>
RotationMatrix<N> random_rotation(std::uint64_t seed) {
  Rng rng(seed);
  return random_rotation<N>(rng);
}

// Element of GL+(n) with condition number at most cond_max: two Haar
// rotations around a log-uniform singular-value profile.
template <int N>
Matrix<N> random_glp(Rng& rng, double cond_max) {
  if (!(cond_max >= 1.0)) throw std::invalid_argument("random_glp: cond_max must be >= 1");
  const double half = 0.5 * std::log(cond_max);
  std::array<double, N> sv;
  for (int i = 0; i < N; ++i) sv[i] = std::exp(rng.uniform(-half, half));
  const auto q1 = random_rotation<N>(rng);
  const auto q2 = random_rotation<N>(rng);
  return q1.matrix() * Matrix<N>::diagonal(sv) * q2.matrix();
}

template <int N>
Matrix<N> random_glp(std::uint64_t seed, double cond_max) {
  Rng rng(seed);
  return random_glp<N>(rng, cond_max);
}

// gl(n) element with Frobenius norm uniform in (0, max_norm]
template <int N>
Matrix<N> random_gl(Rng& rng, double max_norm) {
  Matrix<N> x;
  double n;
  do {
    for (double& v : x.a) v = rng.normal();
    n = frobenius_norm(x);
  } while (n < 1e-12);
  return (rng.uniform(0.0, 1.0) * max_norm / n) * x;
}

}  // namespace geostrain
