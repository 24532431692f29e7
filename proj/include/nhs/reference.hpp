#pragma once

#include <span>

#include "nhs/norms.hpp"
#include "nhs/semigroup.hpp"

/// Serial reference implementations. Everything here trades speed for
/// transparency: direct O(N^{2n}) kernel quadrature instead of the FFT
/// convolution, plain loops instead of parallel reductions, explicit time
/// stepping instead of Duhamel quadrature. The fast paths are tested and
/// benchmarked against these.
namespace nhs::ref {

/// Whole-space heat flow by direct summation
/// u(x_i) = h^n sum_j h_t(x_i - x_j) f(x_j), with the same row-mass
/// normalization convention as the spectral path.
ScalarField heat_extend_direct(const ScalarField& f, double t, const ExtendOptions& opt = {});

/// Zero-flux heat flow by direct quadrature of the reflection kernel over
/// the half space containing each node. The normalizer is the kernel row
/// sum over that half space, which unfolds to exactly the whole-space row
/// mass used by the spectral path.
ScalarField neumann_extend_direct(const ScalarField& f, double t, const ExtendOptions& opt = {});

/// Ball-family norms re-evaluated with straight serial loops (and the
/// direct extends above where a heat flow is needed).
double bmo_neumann_norm_direct(const ScalarField& f, const BallFamily& fam);
double tent_inf2_norm_direct(const SpaceTimeField& u, const BallFamily& fam);

/// Explicit conservative finite-difference integrator for
///   d/dt u = Lap_N u - div(b u^2)
/// on the grid, marching from u(0) = u0 and landing exactly on every time
/// level. Fluxes (diffusive and advective) vanish at the interface and at
/// the box edges, so each half space conserves mass; for tangential b the
/// interface flux is identically zero and this matches the mild
/// formulation directly. Substeps obey dt <= stability * h^2 / (2n).
/// Independent oracle for the fixed-point solver.
SpaceTimeField explicit_stepper(const ScalarField& u0, std::span<const double> b,
                                double stability = 0.9);

}  // namespace nhs::ref
