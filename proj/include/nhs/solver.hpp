#pragma once

#include <span>
#include <string>
#include <vector>

#include "nhs/grid.hpp"
#include "nhs/norms.hpp"
#include "nhs/semigroup.hpp"

namespace nhs {

/// Knobs of the fixed-point iteration for the mild equation
///   u = e^{t Lap_N} u0 - A(b u^2),
/// A the Duhamel operator below. `direction` is the unit vector b that
/// turns the scalar square into divergence data; empty means e_1
/// (tangential, the boundary-compatible default). `data_scale` multiplies
/// u0 once before iterating — the smallness dial of the sweep
/// experiments.
struct SolverConfig {
    double data_scale = 1.0;
    int max_iterations = 25;
    double convergence_tol = 1e-10;   // on the path-norm increment
    std::vector<double> direction;    // |b| = 1; empty = e_1
    DuhamelOptions duhamel;

    /// b resolved against the grid dimension. Throws numeric_error when
    /// the stored vector has the wrong length or is not unit.
    std::vector<double> resolved_direction(int dimension) const;
};

/// alpha_j(t_k) = b_j u(t_k)^2: the quadratic forcing fed to the
/// bilinear operator.
TimeIndexedVectorField quadratic_forcing(const SpaceTimeField& u, std::span<const double> b);

/// A(alpha)(t_k) = int_0^{t_k} e^{(t_k - s) Lap_N} div alpha(s) ds,
/// slice-wise Duhamel quadrature; slices are independent and run in
/// parallel.
SpaceTimeField bilinear_A(const TimeIndexedVectorField& alpha, const DuhamelOptions& opt = {});

/// The three-part decomposition of A used by the Carleson estimate:
///   a1(t) = int_0^t [e^{(t-s) Lap_N} - e^{(t+s) Lap_N}] div alpha ds
///   a2(t) = int_0^T  e^{(t+s) Lap_N} div alpha ds
///   a3(t) = -int_t^T e^{(t+s) Lap_N} div alpha ds
/// (the upper limits are the sampled horizon T standing in for infinity).
/// a1 shares its quadrature mesh with `a`, so the (t-s) parts cancel
/// exactly and the reconstruction defect
///   path_norm(a1+a2+a3 - a) / path_norm(a)
/// measures only the disagreement of two quadratures of the smooth
/// (t+s)-flow integrand.
struct SplitA {
    SpaceTimeField a1;
    SpaceTimeField a2;
    SpaceTimeField a3;
    SpaceTimeField a;  // the unsplit operator on the same mesh
    double reconstruction_defect = 0.0;
};
SplitA split_A(const TimeIndexedVectorField& alpha, const BallFamily& fam,
               const DuhamelOptions& opt = {});

/// T F(s) = -s^{-1/2} int_0^{2s} e^{mu Lap_N} div F(s) d mu, evaluated at
/// every time level (s = t_k). The substitution mu = 2 s nu^2 absorbs the
/// kernel-gradient singularity at mu = 0.
SpaceTimeField operator_T(const TimeIndexedVectorField& F, const DuhamelOptions& opt = {});

/// R F(s) = int_s^T e^{(s + tau) Lap_N} tau^{-1/2} div F(tau) d tau,
/// evaluated at every time level; tau = sigma^2 removes the tau^{-1/2}
/// weight exactly. The slice at the horizon is an empty integral (zero).
SpaceTimeField operator_R(const TimeIndexedVectorField& F, const DuhamelOptions& opt = {});

/// Maximal-regularity action M+ F(t) = int_0^t L e^{-(t-s) L} F(s) ds
/// with L = -Lap_N, realized as minus the per-half finite-difference
/// Laplacian of the zero-flux flow. The s = t(1 - sigma^2) midpoint mesh
/// clusters quadrature nodes at the s = t end where the integrand varies
/// fastest. sigma_points = 0 means twice the number of time levels.
SpaceTimeField maximal_regularity(const SpaceTimeField& F, int sigma_points = 0);

/// The fixed-point map Theta(u) = e^{t Lap_N} u0 - A(b u^2). u0 enters
/// exactly as passed; the iteration drivers below apply data_scale before
/// calling this.
SpaceTimeField theta(const SpaceTimeField& u, const ScalarField& u0,
                     const SolverConfig& cfg = {});

struct IterationRecord {
    int k = 0;            // iteration number, 1-based
    double norm = 0.0;      // path_norm of the iterate
    double increment = 0.0;  // path_norm of the step
    double ratio = 0.0;      // increment_k / increment_{k-1}, 0 while undefined
};

struct SolverDiagnostics {
    std::vector<IterationRecord> iterations;
    double residual = 0.0;              // path_norm(u - Theta(u)), recomputed honestly
    double contraction_estimate = 0.0;  // max step ratio over k >= 2
    std::string verdict;                // converged | diverged | max-iter
};

struct SolverResult {
    SpaceTimeField u;
    SolverDiagnostics diagnostics;
};

/// Picard iteration u_{k+1} = Theta(u_k) started from the free evolution
/// u_0 = e^{t Lap_N}(data_scale * u0). Stops when the path-norm increment
/// drops below convergence_tol ("converged"), after max_iterations
/// ("max-iter"), or once increments have grown three times in a row
/// ("diverged"). A non-finite iterate throws numeric_error("blow-up
/// detected").
SolverResult picard_solve(const ScalarField& u0, const SolverConfig& cfg, const BallFamily& fam);

/// Mild-equation defect path_norm(u - Theta(u)) with Theta evaluated
/// fresh (data_scale applied to u0 as in picard_solve).
double residual(const SpaceTimeField& u, const ScalarField& u0, const SolverConfig& cfg,
                const BallFamily& fam);

/// path_norm(Theta(u) - Theta(v)) / path_norm(u - v). The caloric term
/// cancels algebraically, so the quotient is evaluated from the bilinear
/// parts alone; u = v yields NaN (undefined, reported as such).
double contraction_factor(const SpaceTimeField& u, const SpaceTimeField& v,
                          const ScalarField& u0, const SolverConfig& cfg, const BallFamily& fam);

}  // namespace nhs
