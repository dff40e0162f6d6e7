#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "geostrain/matrix_functions.hpp"
#include "geostrain/random.hpp"

using namespace geostrain;

namespace {

template <int N>
void check_close(const Matrix<N>& a, const Matrix<N>& b, double tol) {
  CAPTURE(N, tol);
  REQUIRE(frobenius_norm(a - b) <= tol);
}

// independent 2x2 symmetric eigendecomposition for the sqrt oracle
Mat2 sqrt_sym_2x2_oracle(const Mat2& s) {
  const double half_diff = 0.5 * (s(0, 0) - s(1, 1));
  const double mean = 0.5 * (s(0, 0) + s(1, 1));
  const double r = std::hypot(half_diff, s(0, 1));
  const double l1 = mean - r, l2 = mean + r;
  const double theta = 0.5 * std::atan2(2.0 * s(0, 1), s(0, 0) - s(1, 1));
  const double c = std::cos(theta), sn = std::sin(theta);
  // columns (c, sn) and (-sn, c) are the eigenvectors of l2 and l1
  const double a = std::sqrt(l2), b = std::sqrt(l1);
  return mat2(a * c * c + b * sn * sn, (a - b) * c * sn,
              (a - b) * c * sn, a * sn * sn + b * c * c);
}

}  // namespace

TEST_CASE("mat_exp examples", "[matfun]") {
  check_close(mat_exp(Mat2::zero()), Mat2::identity(), 0.0);
  check_close(mat_exp(mat2(1, 0, 0, 2)),
              mat2(std::exp(1.0), 0, 0, std::exp(2.0)), 1e-13 * std::exp(2.0));
  const double theta = M_PI / 3.0;
  check_close(mat_exp(mat2(0, -theta, theta, 0)), rot2(theta), 1e-14);
}

TEST_CASE("mat_exp overflow reports a range error", "[matfun]") {
  CHECK_THROWS_AS(mat_exp(Mat2::scaled_identity(1e4)), std::range_error);
}

TEST_CASE("mat_exp stays accurate at the contract norm bound", "[matfun]") {
  const Mat2 x = mat2(20, 0, 0, -20);
  const Mat2 e = mat_exp(x);
  CHECK(std::abs(e(0, 0) - std::exp(20.0)) <= 1e-13 * std::exp(20.0));
  CHECK(std::abs(e(1, 1) - std::exp(-20.0)) <= 1e-13 * std::exp(-20.0));

  // rotation by 20 radians has an exact closed form
  const Mat2 big_rot = mat_exp(mat2(0, -20, 20, 0));
  CHECK(frobenius_norm(Mat2(big_rot - rot2(20.0))) <= 1e-13);
}

TEST_CASE("mat_exp has positive determinant", "[matfun]") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto xi = random_gl<3>(rng, 6.0);
    REQUIRE(mat_exp(xi).det() > 0.0);
  }
}

TEST_CASE("mat_log_principal examples", "[matfun]") {
  check_close(mat_log_principal(Mat2::identity()), Mat2::zero(), 1e-15);
  check_close(mat_log_principal(mat2(std::exp(1.0), 0, 0, std::exp(2.0))),
              mat2(1, 0, 0, 2), 1e-13);
  const double theta = M_PI / 3.0;
  check_close(mat_log_principal(rot2(theta)), mat2(0, -theta, theta, 0), 1e-13);
}

TEST_CASE("mat_log_principal domain errors", "[matfun]") {
  CHECK_THROWS_AS(mat_log_principal(mat2(1, 0, 0, 0)), std::domain_error);   // singular
  CHECK_THROWS_AS(mat_log_principal(mat2(-1, 0, 0, -2)), std::domain_error); // negative spectrum
  CHECK_THROWS_AS(mat_log_principal(rot2(M_PI)), std::domain_error);         // -1 pair
  CHECK_THROWS_AS(mat_log_principal(mat3(-1, 0, 0, 0, 2, 0, 0, 0, 3)),
                  std::domain_error);
}

TEMPLATE_TEST_CASE_SIG("exp/log round trip", "[matfun]", ((int N), N), 2, 3) {
  // |xi| <= 2 < pi keeps the eigenvalue imaginary parts inside (-pi, pi)
  Rng rng(7 + N);
  for (int trial = 0; trial < 200; ++trial) {
    const auto xi = random_gl<N>(rng, 2.0);
    const auto back = mat_log_principal(mat_exp(xi));
    REQUIRE(frobenius_norm(Matrix<N>(back - xi)) <=
            1e-10 * std::max(1.0, frobenius_norm(xi)));
  }
}

TEMPLATE_TEST_CASE_SIG("log followed by exp reproduces the input", "[matfun]",
                       ((int N), N), 2, 3) {
  Rng rng(17 + N);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_glp<N>(rng, 100.0);
    Matrix<N> lg;
    try {
      lg = mat_log_principal(a);
    } catch (const std::domain_error&) {
      continue;  // eigenvalue on the negative real axis
    }
    REQUIRE(frobenius_norm(Matrix<N>(mat_exp(lg) - a)) <=
            1e-11 * std::max(1.0, frobenius_norm(a)));
  }
}

TEST_CASE("mat_sqrt_spd examples", "[matfun]") {
  check_close(mat_sqrt_spd(SpdMatrix<2>(mat2(4, 0, 0, 9))).matrix(),
              mat2(2, 0, 0, 3), 1e-14);
  check_close(mat_sqrt_spd(SpdMatrix<2>(Mat2::identity())).matrix(),
              Mat2::identity(), 1e-15);

  const Mat2 s = mat2(2, 1, 1, 2);  // eigenvalues 1 and 3
  const Mat2 p = mat_sqrt_spd(SpdMatrix<2>(s)).matrix();
  check_close<2>(p * p, s, 1e-11 * frobenius_norm(s));
  check_close(p, sqrt_sym_2x2_oracle(s), 1e-12);
}

TEST_CASE("spd wrapper rejects bad input", "[matfun]") {
  CHECK_THROWS_AS(SpdMatrix<2>(mat2(1, 2, 0, 1)), std::domain_error);   // not symmetric
  CHECK_THROWS_AS(SpdMatrix<2>(mat2(1, 0, 0, -1)), std::domain_error);  // not positive
}

TEST_CASE("polar decomposition examples", "[matfun]") {
  const auto id = polar_decompose(Mat2::identity());
  check_close(id.r.matrix(), Mat2::identity(), 1e-14);
  check_close(id.u.matrix(), Mat2::identity(), 1e-14);

  const auto diag = polar_decompose(mat2(2, 0, 0, 3));
  check_close(diag.r.matrix(), Mat2::identity(), 1e-14);
  check_close(diag.u.matrix(), mat2(2, 0, 0, 3), 1e-14);

  const Mat2 f = rot2(M_PI / 2.0) * mat2(2, 0, 0, 3);
  const auto factors = polar_decompose(f);
  check_close(factors.r.matrix(), rot2(M_PI / 2.0), 1e-13);
  check_close(factors.u.matrix(), mat2(2, 0, 0, 3), 1e-13);
}

TEST_CASE("polar decomposition rejects non-GL+ input", "[matfun]") {
  CHECK_THROWS_AS(polar_decompose(mat2(1, 0, 0, -1)), std::domain_error);
  CHECK_THROWS_AS(polar_decompose(mat2(1, 1, 1, 1)), std::domain_error);
}

TEST_CASE("polar condition warning", "[matfun]") {
  CHECK_FALSE(polar_decompose(mat2(2, 0, 0, 3)).condition_warning);
  CHECK(polar_decompose(mat2(1e5, 0, 0, 1e-5)).condition_warning);
}

TEMPLATE_TEST_CASE_SIG("polar round trip", "[matfun]", ((int N), N), 2, 3) {
  Rng rng(41 + N);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_glp<N>(rng, 1e3);
    const auto factors = polar_decompose(f);
    REQUIRE(frobenius_norm(Matrix<N>(factors.r.matrix() * factors.u.matrix() - f)) <=
            1e-11 * std::max(1.0, frobenius_norm(f)));
  }
}

TEMPLATE_TEST_CASE_SIG("polar factor is the nearest rotation", "[matfun]",
                       ((int N), N), 2, 3) {
  Rng rng(53 + N);
  const auto f = random_glp<N>(rng, 50.0);
  const auto factors = polar_decompose(f);
  const double best = frobenius_norm(Matrix<N>(f - factors.r.matrix()));
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = random_rotation<N>(rng);
    REQUIRE(frobenius_norm(Matrix<N>(f - q.matrix())) >= best - 1e-9);
  }
}

TEST_CASE("log branches of the identity", "[matfun]") {
  const auto branches = log_branches_2x2(Mat2::identity(), 1);
  REQUIRE(branches.size() == 3);
  const Mat2 j = mat2(0, -1, 1, 0);
  check_close(branches[0], Mat2::zero(), 1e-15);
  // both signs of the full turn appear
  const double two_pi = 2.0 * M_PI;
  const bool plus_first = frobenius_norm(Matrix<2>(branches[1] - two_pi * j)) < 1e-12;
  check_close(branches[plus_first ? 1 : 2], two_pi * j, 1e-12);
  check_close(branches[plus_first ? 2 : 1], -two_pi * j, 1e-12);
}

TEST_CASE("log branches of a quarter turn", "[matfun]") {
  const auto branches = log_branches_2x2(rot2(M_PI / 2.0), 0);
  REQUIRE(branches.size() == 1);
  check_close(branches[0], mat2(0, -M_PI / 2.0, M_PI / 2.0, 0), 1e-13);
}

TEST_CASE("log branches of a rotation-scaling", "[matfun]") {
  const Mat2 a = rot2(M_PI / 2.0) * mat2(2, 0, 0, 2);
  const auto branches = log_branches_2x2(a, 1);
  REQUIRE(branches.size() == 3);
  for (const auto& xi : branches)
    REQUIRE(frobenius_norm(Matrix<2>(mat_exp(xi) - a)) <= 1e-9 * frobenius_norm(a));
  // the minimal-norm branch is the principal one
  const Mat2 expected =
      std::log(2.0) * Mat2::identity() + (M_PI / 2.0) * mat2(0, -1, 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i < branches.size(); ++i)
    if (frobenius_norm(branches[i]) < frobenius_norm(branches[best])) best = i;
  check_close(branches[best], expected, 1e-12);
}

TEST_CASE("log branches with negative scalar input", "[matfun]") {
  const Mat2 a = mat2(-2, 0, 0, -2);
  const auto branches = log_branches_2x2(a, 1);
  REQUIRE(branches.size() == 3);  // angles pi, 3 pi, -pi
  for (const auto& xi : branches)
    REQUIRE(frobenius_norm(Matrix<2>(mat_exp(xi) - a)) <= 1e-9 * frobenius_norm(a));
  CHECK_THROWS_AS(mat_log_principal(a), std::domain_error);
}

TEST_CASE("log branches: distinct negative eigenvalues have no real log", "[matfun]") {
  CHECK(log_branches_2x2(mat2(-1, 0, 0, -2), 3).empty());
}

TEST_CASE("log branch completeness and principal minimality", "[matfun]") {
  Rng rng(71);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_glp<2>(rng, 50.0);
    const auto branches = log_branches_2x2(a, 3);
    for (const auto& xi : branches)
      REQUIRE(frobenius_norm(Matrix<2>(mat_exp(xi) - a)) <=
              1e-9 * std::max(1.0, frobenius_norm(a)));
    Mat2 principal;
    try {
      principal = mat_log_principal(a);
    } catch (const std::domain_error&) {
      continue;  // no principal branch for this sample
    }
    ++checked;
    REQUIRE_FALSE(branches.empty());
    check_close(branches.front(), principal, 1e-9 * std::max(1.0, frobenius_norm(principal)));
    for (const auto& xi : branches)
      REQUIRE(frobenius_norm(xi) + 1e-12 >= frobenius_norm(principal));
  }
  REQUIRE(checked > 50);
}

TEST_CASE("log branches reject unsupported input", "[matfun]") {
  CHECK_THROWS_AS(log_branches_2x2(mat2(1, 0, 0, -1)), std::domain_error);
  CHECK_THROWS_AS(log_branches_2x2(Mat2::identity(), -1), std::invalid_argument);
}

TEST_CASE("random generator contracts", "[matfun]") {
  SECTION("rotations satisfy the construction invariant") {
    // construction itself validates orthogonality and orientation
    (void)random_rotation<2>(11ull);
    (void)random_rotation<3>(11ull);
  }
  SECTION("random GL+ elements have positive determinant and bounded condition") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_glp<3>(rng, 100.0);
      REQUIRE(f.det() > 0.0);
      const auto e = jacobi_eigen_sym(Mat3(f.transpose() * f));
      REQUIRE(std::sqrt(e.values[2] / e.values[0]) <= 100.0 * (1.0 + 1e-10));
    }
  }
  SECTION("fixed seeds reproduce bit-identical output") {
    const auto a = random_glp<2>(321ull, 100.0);
    const auto b = random_glp<2>(321ull, 100.0);
    REQUIRE(a == b);
    REQUIRE(random_rotation<3>(9ull).matrix() == random_rotation<3>(9ull).matrix());
  }
}

TEST_CASE("rotation wrapper validates input", "[matfun]") {
  CHECK_THROWS_AS(RotationMatrix<2>(mat2(1, 1, 0, 1)), std::domain_error);
  CHECK_THROWS_AS(RotationMatrix<2>(mat2(1, 0, 0, -1)), std::domain_error);
}
