#pragma once

#include "nhs/grid.hpp"

namespace nhs {

/// Options for the discrete heat flow.
///
/// The box operator is the truncated integral hat-u(x) = h^n sum_j
/// h_t(x - x_j) f(x_j); near the box edge it loses the Gaussian mass that
/// escapes the box, which would make constants sag there. With
/// `normalize` set (the default) the result is divided by the operator
/// applied to the constant 1 (a product of per-axis row masses), which
/// restores exact conservation: constants are fixed pointwise, the
/// maximum principle survives, and as t -> 0 the operator degrades
/// gracefully to the identity. The raw operator stays available for
/// tests that compare against plain kernel quadrature.
struct ExtendOptions {
    bool normalize = true;
};

/// Whole-space heat flow e^{t Laplacian} f on the box, via separable
/// zero-padded FFT convolution with the sampled Gaussian.
ScalarField heat_extend_whole(const ScalarField& f, double t, const ExtendOptions& opt = {});

/// Half-space heat flow with zero normal flux at x_n = 0, realized by the
/// reflection identity: even-extend each half, run the whole-space flow,
/// restrict back. Equals direct quadrature of the reflection kernel over
/// each half space (up to roundoff).
ScalarField neumann_extend(const ScalarField& f, double t, const ExtendOptions& opt = {});

/// Caloric extension: u(., t_k) = neumann_extend(f, t_k) at every time
/// level of the grid.
SpaceTimeField build_extension(const ScalarField& f);

/// Same with the whole-space flow (no interface), for the comparisons
/// against classical norms.
SpaceTimeField build_extension_whole(const ScalarField& f);

/// How e^{tau Laplacian_N} div alpha is discretized.
///
/// `kernel_gradient` moves the divergence onto the kernel: tangential
/// components convolve their even extension with the Gaussian-derivative
/// kernel, the normal component convolves its odd extension (the image
/// term flips sign under reflection), and the interface boundary term
/// from integration by parts is added by (n-1)-dimensional quadrature on
/// the first node row. `finite_difference` applies the conservative flow
/// to the finite-difference divergence instead. The two must agree on
/// resolved data; a shipped test checks that. Below the spatial
/// resolution limit (tau < h^2) the sampled derivative kernel cannot be
/// trusted and the kernel_gradient path falls back to the
/// finite-difference one, whose small-tau limit is exact.
enum class DivergencePath { kernel_gradient, finite_difference };

struct DuhamelOptions {
    DivergencePath path = DivergencePath::kernel_gradient;
    int sigma_points = 0;  // 0: twice the number of time levels
};

/// e^{tau Laplacian_N} applied to div alpha for a single vector slice.
ScalarField apply_divergence_semigroup(const VectorField& alpha, double tau, DivergencePath path);

/// Sample a time-indexed field between its levels: linear interpolation
/// in sqrt(s), the variable in which the graded levels are uniform,
/// clamped to the first/last slice outside the sampled range.
VectorField vector_slice_at(const TimeIndexedVectorField& alpha, double s);
ScalarField scalar_slice_at(const SpaceTimeField& u, double s);

/// Duhamel integral int_0^t e^{(t-s) Laplacian_N} div alpha(s) ds.
///
/// Substituting s = t (1 - sigma^2) and integrating with the midpoint
/// rule on a uniform sigma mesh absorbs the (t-s)^{-1/2} kernel-gradient
/// singularity at s = t into the Jacobian, so the transformed integrand
/// stays bounded. alpha is interpolated between its time levels linearly
/// in sqrt(s) (the natural variable of the graded mesh) and clamped to
/// the first/last slice beyond them. t must coincide with a time level.
ScalarField duhamel_divergence(const TimeIndexedVectorField& alpha, double t,
                               const DuhamelOptions& opt = {});

}  // namespace nhs
