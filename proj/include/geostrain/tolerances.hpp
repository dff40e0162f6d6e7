#pragma once

// Central constants table. Every tolerance used by construction invariants,
// iterative kernels and verifiers lives here so the contracts stay in sync
// with the tests.

namespace geostrain {
namespace tol {

// construction invariants of the wrapper types
inline constexpr double rotation_orthogonality = 1e-10;
inline constexpr double spd_symmetry = 1e-10;
inline constexpr double skew_symmetry = 1e-10;
inline constexpr double polar_factor_residual = 1e-11;  // relative to max(1, |F|)

// matrix-function kernel
inline constexpr double exp_log_round_trip = 1e-11;   // relative
inline constexpr double sqrt_residual = 1e-11;        // relative
inline constexpr double branch_forward_check = 1e-9;  // relative
inline constexpr double polar_newton_step = 1e-14;    // relative step size
inline constexpr int polar_newton_max_iter = 100;
inline constexpr double singular_det = 1e-300;

// metric
inline constexpr double metric_inverse_det = 1e-14;

// geodesics
inline constexpr double endpoint_residual = 1e-9;  // relative to max(1, |P|)
inline constexpr double quadrature_rel = 1e-10;
inline constexpr int quadrature_max_panels = 1 << 14;
inline constexpr int quadrature_order = 16;
inline constexpr double lm_fd_step = 1e-6;
inline constexpr double lm_initial_damping = 1e-3;
inline constexpr int lm_max_iter = 500;

// rotation search / theorem verifiers
inline constexpr double theorem1_gap_floor = -1e-8;
inline constexpr double scan_gap = 1e-6;            // grid resolution bound
inline constexpr double identity_equalities = 1e-10;
inline constexpr double upper_bound_identity = 1e-12;
inline constexpr int so3_descent_max_iter = 200;
inline constexpr int log_branch_default_k_max = 3;

}  // namespace tol
}  // namespace geostrain
