#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "geostrain/geodesic.hpp"
#include "geostrain/random.hpp"
#include "geostrain/strain.hpp"

using namespace geostrain;

namespace {

template <int N>
void check_close(const Matrix<N>& a, const Matrix<N>& b, double tol) {
  CAPTURE(N, tol);
  REQUIRE(frobenius_norm(a - b) <= tol);
}

template <int N>
GeodesicSpec<N> random_spec(Rng& rng, double xi_norm = 1.5) {
  const MetricParams p(rng.uniform(0.3, 2.5), rng.uniform(0.1, 2.5), rng.uniform(0.3, 2.5));
  return GeodesicSpec<N>(random_glp<N>(rng, 20.0), random_gl<N>(rng, xi_norm), p);
}

}  // namespace

TEST_CASE("geodesic point at t = 0 is the base", "[geodesic]") {
  Rng rng(1);
  const auto spec = random_spec<2>(rng);
  check_close(geodesic_point(spec, 0.0), spec.base, 0.0);
}

TEST_CASE("symmetric tangents give a one-exponential curve", "[geodesic]") {
  const MetricParams p(1.0, 3.0, 1.0);
  const Mat2 f = mat2(2, 0, 1, 1);
  const Mat2 s = mat2(0.3, 0.1, 0.1, -0.2);
  const GeodesicSpec<2> spec(f, s, p);
  for (double t : {-0.5, 0.25, 1.0, 2.0})
    check_close<2>(geodesic_point(spec, t), f * mat_exp(Mat2(t * s)), 1e-13);
}

TEST_CASE("skew tangent with mu_c = mu composes the exponentials", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  const Mat2 j = mat2(0, -1, 1, 0);
  const Mat2 f = mat2(1, 1, 0, 2);
  const GeodesicSpec<2> spec(f, j, p);
  // gamma(1) = F exp(-J) exp(2J) = F exp(J) because the factors commute
  check_close<2>(geodesic_point(spec, 1.0), f * mat_exp(j), 1e-13);
}

TEST_CASE("geodesic velocity closed forms", "[geodesic]") {
  Rng rng(2);
  const auto spec = random_spec<3>(rng);
  check_close<3>(geodesic_velocity(spec, 0.0), spec.base * spec.xi, 1e-12);

  const GeodesicSpec<3> still(spec.base, Mat3::zero(), spec.params);
  check_close(geodesic_velocity(still, 0.7), Mat3::zero(), 1e-14);
}

TEMPLATE_TEST_CASE_SIG("velocity agrees with central differences", "[geodesic]",
                       ((int N), N), 2, 3) {
  Rng rng(37 + N);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_spec<N>(rng, 1.0);
    const double t = 0.37;
    const Matrix<N> fd =
        (1.0 / (2.0 * h)) * (geodesic_point(spec, t + h) - geodesic_point(spec, t - h));
    REQUIRE(frobenius_norm(Matrix<N>(geodesic_velocity(spec, t) - fd)) <= 1e-7);
  }
}

TEST_CASE("length of a constant curve is zero", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  const Mat2 f = mat2(2, 1, 0, 1);
  const double len = curve_length<2>(
      p, [&](double) { return f; }, [&](double) { return Mat2::zero(); }, 0.0, 1.0);
  CHECK(len == 0.0);
}

TEMPLATE_TEST_CASE_SIG("geodesic length equals the tangent norm", "[geodesic]",
                       ((int N), N), 2, 3) {
  Rng rng(47 + N);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_spec<N>(rng);
    const double len = curve_length(spec, 0.0, 1.0);
    const double expected = weighted_norm(spec.params, spec.xi);
    REQUIRE(std::abs(len - expected) <= 1e-9 * std::max(1.0, expected));
  }
}

TEST_CASE("length of a straight segment", "[geodesic]") {
  // gamma(t) = 1 + t ident has speed sqrt(kappa/2) |tr((1+t)^-1)| = sqrt(2)/(1+t)
  const MetricParams p(1.0, 1.0, 1.0);
  const double len = curve_length<2>(
      p, [](double t) { return Mat2((1.0 + t) * Mat2::identity()); },
      [](double) { return Mat2(Mat2::identity()); }, 0.0, 1.0);
  CHECK(len == Catch::Approx(std::sqrt(2.0) * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("sampled-curve length matches the analytic segment", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  // two samples span exactly the straight segment 1 + t ident on [0, 1]
  const std::vector<Mat2> ends{Mat2::identity(), Mat2(2.0 * Mat2::identity())};
  CHECK(curve_length(p, ends, 0.0, 1.0) ==
        Catch::Approx(std::sqrt(2.0) * std::log(2.0)).epsilon(1e-10));

  // a densely sampled geodesic converges to the analytic length
  Rng rng(53);
  const auto spec = random_spec<2>(rng, 1.0);
  std::vector<Mat2> samples;
  for (int i = 0; i <= 200; ++i) samples.push_back(geodesic_point(spec, i / 200.0));
  const double analytic = curve_length(spec, 0.0, 1.0);
  CHECK(curve_length(spec.params, samples, 0.0, 1.0) ==
        Catch::Approx(analytic).epsilon(1e-4));
}

TEST_CASE("curve length rejects curves leaving GL+", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(
      curve_length<2>(
          p, [](double t) { return mat2(1, 0, 0, 0.5 - t); },
          [](double) { return mat2(0, 0, 0, -1); }, 0.0, 1.0),
      std::domain_error);
}

TEMPLATE_TEST_CASE_SIG("constant speed along the curve", "[geodesic]", ((int N), N), 2, 3) {
  Rng rng(61 + N);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_spec<N>(rng);
    const double expected = weighted_norm_sq(spec.params, spec.xi);
    for (int i = 0; i < 20; ++i) {
      const double t = i / 19.0;
      const Matrix<N> g = geodesic_point(spec, t);
      const Matrix<N> v = geodesic_velocity(spec, t);
      const double speed_sq = riemannian_metric_at(spec.params, g, v, v);
      REQUIRE(std::abs(speed_sq - expected) <= 1e-9 * std::max(1.0, expected));
    }
  }
}

TEMPLATE_TEST_CASE_SIG("left invariance of curve length", "[geodesic]", ((int N), N), 2, 3) {
  Rng rng(71 + N);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = random_spec<N>(rng);
    const auto a = random_glp<N>(rng, 20.0);
    const double base_len = curve_length(spec, 0.0, 1.0);
    const double moved_len = curve_length<N>(
        spec.params, [&](double t) { return Matrix<N>(a * geodesic_point(spec, t)); },
        [&](double t) { return Matrix<N>(a * geodesic_velocity(spec, t)); }, 0.0, 1.0);
    REQUIRE(std::abs(moved_len - base_len) <= 1e-10 * std::max(1.0, base_len));
  }
}

TEST_CASE("solve_endpoint with coincident endpoints", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  const Mat2 f = mat2(2, 1, 0, 1);
  const auto report = solve_endpoint(p, f, f);
  CHECK(report.converged);
  CHECK(report.residual <= tol::endpoint_residual * std::max(1.0, frobenius_norm(f)));
  CHECK(frobenius_norm(report.xi) <= 1e-10);
  CHECK(report.length <= 1e-10);
}

TEST_CASE("solve_endpoint recovers a small symmetric tangent", "[geodesic]") {
  const MetricParams p(1.0, 2.0, 1.0);
  const Mat2 f = mat2(1.5, 0.2, 0.0, 0.8);
  const Mat2 s = mat2(0.05, 0.02, 0.02, -0.03);
  const Mat2 target = f * mat_exp(s);
  const auto report = solve_endpoint(p, f, target);
  REQUIRE(report.converged);
  check_close(report.xi, s, 1e-8);
}

TEMPLATE_TEST_CASE_SIG("solve_endpoint round trip", "[geodesic]", ((int N), N), 2, 3) {
  Rng rng(83 + N);
  const MetricParams p(1.0, 1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_glp<N>(rng, 20.0);
    const auto xi0 = random_gl<N>(rng, 1.0);
    const Matrix<N> target = endpoint_map(GeodesicSpec<N>(f, xi0, p));
    const auto report = solve_endpoint(p, f, target);
    REQUIRE(report.converged);
    REQUIRE(report.residual <= 1e-9 * std::max(1.0, frobenius_norm(target)));
    REQUIRE(report.length <= weighted_norm(p, xi0) + 1e-8);
  }
}

TEST_CASE("solve_endpoint reports non-convergence without throwing", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  const Mat2 f = Mat2::identity();
  const Mat2 target = mat2(40, 0, 0, 0.02);
  const auto report =
      solve_endpoint(p, f, target, std::optional<Mat2>(mat2(0, -9, 9, 0)), 2);
  CHECK_FALSE(report.converged);
}

TEST_CASE("solve_endpoint validates the group constraint", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(solve_endpoint(p, mat2(1, 0, 0, -1), Mat2::identity()), std::domain_error);
  CHECK_THROWS_AS(solve_endpoint(p, Mat2::identity(), mat2(1, 0, 0, -1)), std::domain_error);
}

TEST_CASE("distance estimate for coincident endpoints", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  const Mat2 f = mat2(3, 0, 1, 1);
  const auto est = geodesic_distance_estimate(p, f, f, 3);
  CHECK(est.value <= 1e-10);
  CHECK(est.reports.size() == 3);
}

TEST_CASE("distance estimate of a symmetric move brackets the closed form", "[geodesic]") {
  const MetricParams p(1.0, 1.0, 1.0);
  const Mat2 s = mat2(1, 0, 0, -1);
  const Mat2 target = mat_exp(s);
  const auto est = geodesic_distance_estimate(p, Mat2::identity(), target, 4);
  CHECK(est.value == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // sampled lower bound: the scan minimum over SO(2) never exceeds the
  // distance from the identity, since the identity is itself a rotation
  const auto scan = lower_bound_scan(p, target, 4000, 5);
  CHECK(est.value >= std::sqrt(scan.value) - 1e-6);
}

TEST_CASE("distance estimate is left invariant", "[geodesic]") {
  Rng rng(91);
  const MetricParams p(1.2, 0.7, 0.9);
  const auto f = random_glp<2>(rng, 10.0);
  const auto xi = random_gl<2>(rng, 0.8);
  const Mat2 target = endpoint_map(GeodesicSpec<2>(f, xi, p));
  const auto a = random_glp<2>(rng, 10.0);
  const auto base = geodesic_distance_estimate(p, f, target, 4);
  const auto moved = geodesic_distance_estimate<2>(p, a * f, a * target, 4);
  CHECK(moved.value == Catch::Approx(base.value).margin(1e-6));
}

TEST_CASE("distance estimate surfaces the pseudometric flag", "[geodesic]") {
  const MetricParams p(1.0, 0.0, 1.0);
  const Mat2 f = mat2(2, 0, 0, 1);
  const auto est = geodesic_distance_estimate(p, f, f, 1);
  CHECK(est.pseudometric);
  const auto report = solve_endpoint(p, f, f);
  CHECK(report.pseudometric);
}

TEST_CASE("estimate is monotone in the number of starts", "[geodesic]") {
  Rng rng(97);
  const MetricParams p(1.0, 1.5, 1.0);
  const auto f = random_glp<2>(rng, 10.0);
  const auto xi = random_gl<2>(rng, 1.2);
  const Mat2 target = endpoint_map(GeodesicSpec<2>(f, xi, p));
  double prev = std::numeric_limits<double>::infinity();
  for (int starts : {1, 2, 4, 8}) {
    const auto est = geodesic_distance_estimate(p, f, target, starts, 777);
    CHECK(est.value <= prev + 1e-12);
    prev = est.value;
  }
}
