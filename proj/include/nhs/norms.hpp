#pragma once

#include <string>
#include <utility>

#include "nhs/grid.hpp"
#include "nhs/semigroup.hpp"

namespace nhs {

/// A spatial ball B(center, radius) standing for the parabolic Carleson
/// box B x (0, radius^2].
struct ParabolicBall {
    std::vector<double> center;
    double radius = 0.0;
};

/// Finite stand-in for the supremum over all balls.
///
/// Radii are dyadic fractions of the box half-width, r_j = 2^{-j} L for
/// j = coarsest_level .. finest_level. For each radius the centers run
/// over the lattice { m * r / lattice_divisor } per axis, clipped so the
/// ball stays inside the box. The lattice contains the origin and is
/// symmetric under x -> -x; that symmetry is load-bearing: the
/// reflection arguments behind the extension-equivalence checks need the
/// mirror image of every family ball to be in the family too.
struct BallFamily {
    std::vector<ParabolicBall> balls;
    int coarsest_level = 0;
    int finest_level = 0;
    int lattice_divisor = 2;

    bool empty() const { return balls.empty(); }
    /// e.g. "dyadic r=2^-j L, j=1..4, centers r/2, 108 balls"
    std::string descriptor() const;
};

/// Build the family for a grid. The smallest radius must cover at least
/// one node (r >= spacing) and its Carleson box must contain the first
/// time level (r^2 >= t_1); otherwise the sampled suprema would be over
/// empty sets and a numeric_error("time grid too coarse for the ball
/// family" / "ball radius below grid spacing") is thrown.
BallFamily make_ball_family(const GridSpec& spec, int coarsest_level, int finest_level,
                            int lattice_divisor = 2);

/// Weights w_k for int_0^tau g(t) dt =~ sum_k w_k g(t_k) on the graded
/// levels, indexed by time level. The rule is the trapezoid in
/// sigma = sqrt(t) (the variable in which the levels are uniform), with
/// two special segments: on [0, t_1] a triangle anchored at psi(0) = 0
/// (the Carleson integrands of caloric fields vanish at t = 0; constants
/// are still integrated exactly because the transformed integrand 2 sigma
/// g is linear there), and when tau falls strictly between levels a
/// left-endpoint rectangle on the trailing partial segment. tau beyond
/// the last level is clipped to it: Carleson boxes taller than the
/// sampled horizon are integrated over their sampled part only.
/// Requires tau >= t_1.
std::vector<std::pair<int, double>> carleson_time_weights(const GridSpec& spec, double tau);

/// d/dt along the time levels: 3-point nonuniform interior stencil,
/// one-sided 3-point at the first/last level (2-point when only two
/// levels exist). Exact on fields quadratic in t.
SpaceTimeField time_derivative(const SpaceTimeField& u);

/// Mean oscillation against the zero-flux heat flow at the ball scale:
/// max over the family of |B|^{-1} int_B |f - e^{r^2 Laplacian_N} f|.
/// The flow at time r^2 is computed once per distinct radius and shared
/// by all balls of that radius.
double bmo_neumann_norm(const ScalarField& f, const BallFamily& fam);

/// Classical bounded mean oscillation: the same with the ball average of
/// f in place of the heat flow.
double classical_bmo_norm(const ScalarField& f, const BallFamily& fam);

/// Carleson functional of |grad u|^2 with grad = (spatial gradient,
/// d/dt), evaluated on each half space separately (stencils never cross
/// the interface) and maximized over the two:
/// sqrt( max_B max_{+-} r^{-n} int_0^{r^2} int_{B cap half} |grad u|^2 ).
double tmo_norm(const SpaceTimeField& u, const BallFamily& fam);

/// Uniform Carleson box averages of |u|^2 over the family apices
/// (x_B, r_B^2): sqrt( max_B r^{-n} int_0^{r^2} int_B |u|^2 ).
double tent_inf2_norm(const SpaceTimeField& u, const BallFamily& fam);

/// Same box geometry with the integrand |u| to the first power and no
/// outer square root: max_B r^{-n} int_0^{r^2} int_B |u|.
double tent_inf1_norm(const SpaceTimeField& u, const BallFamily& fam);

/// Cone-integral tent norm
///   int_box ( int int_{|y-x| < sqrt(s)} |u(y,s)|^2 dy ds / s^{n/2+1} )^{1/2} dx
/// with the s-integral running over the sampled levels (0, t_M]; the
/// sub-t_1 part of the cone is handled by the leading-triangle convention
/// of carleson_time_weights.
double tent_12_norm(const SpaceTimeField& u);

/// Carleson condition on the zero-flux caloric extension:
/// tent_inf2_norm(build_extension(f)). Finite stand-in for the
/// divergence-of-BMO characterization norm.
double bmo_inv_neumann_norm(const ScalarField& f, const BallFamily& fam);

/// Same condition on the whole-space extension (no interface); the
/// classical counterpart used by the extension-equivalence checks.
double bmo_inv_classical_norm(const ScalarField& f, const BallFamily& fam);

/// sup_k sqrt(t_k) max_x |u(x, t_k)|.
double weighted_linf_norm(const SpaceTimeField& u);

/// The solution-path norm: weighted_linf_norm + tent_inf2_norm.
double path_norm(const SpaceTimeField& u, const BallFamily& fam);

/// Heat characterization of the (-1)-smoothness Besov norm:
/// sup_k sqrt(t_k) max_x |e^{t_k Laplacian} f| over the grid's levels,
/// whole-space flow.
double besov_heat_norm(const ScalarField& f);

/// Which generator drives the vertical square function.
enum class SquareFnVariant { neumann, classical };

/// Vertical square function
///   S f(x) = ( int int_{|y-x| < t} |t^2 Lap e^{t^2 Lap} f(y)|^2
///              dy dt / t^{n+1} )^{1/2},
/// with Lap the zero-flux or the whole-space Laplacian according to the
/// variant (finite-difference Laplacian of the corresponding heat flow at
/// time t^2). The t-integral is a midpoint rule on t_j uniform in
/// (0, sqrt(T)] with `time_samples` points (0 means: as many as the grid
/// has time levels).
ScalarField square_function(const ScalarField& f, SquareFnVariant variant = SquareFnVariant::neumann,
                            int time_samples = 0);

/// L^1 norm of the zero-flux square function: the Hardy-space norm of the
/// atom-decomposition characterization.
double hardy_norm(const ScalarField& f, int time_samples = 0);

/// L^1 norm of the classical (whole-space) square function, kept beside
/// hardy_norm so the interface's effect on atoms is measurable.
double square_fn_l1_norm(const ScalarField& f, int time_samples = 0);

/// Every norm above for one input, with the discretization metadata that
/// gives the numbers meaning.
struct NormReport {
    double bmo_N = 0.0;
    double tmo = 0.0;
    double tent_inf2 = 0.0;
    double tent_inf1 = 0.0;
    double tent_12 = 0.0;
    double bmo_inv_N = 0.0;
    double weighted_linf = 0.0;
    double path_eps = 0.0;
    double hardy = 0.0;
    double square_fn_l1 = 0.0;
    std::string ball_family;
    std::string grid;

    bool finite() const;
};

/// Builds the caloric extension of f once and evaluates the full report.
NormReport compute_norm_report(const ScalarField& f, const BallFamily& fam);

}  // namespace nhs
