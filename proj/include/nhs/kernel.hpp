#pragma once

#include <span>
#include <vector>

#include "nhs/grid.hpp"

namespace nhs {

/// Which transition kernel to evaluate on the two half spaces.
///
/// `neumann` is the reflection (method of images) kernel with a plus sign
/// between the direct and mirrored Gaussians: it conserves mass on each
/// half space and has vanishing normal derivative at the interface.
/// `dirichlet` is the minus-sign sibling, kept for contrast: it absorbs
/// mass at the interface and is exercised by tests that demonstrate why
/// the plus sign is the zero-flux kernel. `whole_space` ignores the
/// interface entirely.
enum class KernelVariant { neumann, dirichlet, whole_space };

/// One kernel evaluation request: p_t(x, y) under the chosen variant.
struct KernelQuery {
    double t = 1.0;
    std::vector<double> x;
    std::vector<double> y;
    KernelVariant variant = KernelVariant::neumann;
};

/// Whole-space Gaussian h_t(x) = (4 pi t)^{-n/2} exp(-|x|^2 / 4t).
double gaussian_kernel(int dimension, double t, std::span<const double> x);

/// Reflection kernel on the half spaces. Zero when x and y lie in
/// opposite open half spaces (x_n y_n < 0); points on the interface
/// itself (x_n y_n = 0) count as same-side. Requires t > 0.
double neumann_kernel(double t, std::span<const double> x, std::span<const double> y);
double dirichlet_kernel(double t, std::span<const double> x, std::span<const double> y);

double heat_kernel(const KernelQuery& q);

/// Gradient in x of the chosen kernel. Returns the zero vector when x and
/// y lie in opposite half spaces.
std::vector<double> neumann_kernel_gradient(double t, std::span<const double> x,
                                            std::span<const double> y,
                                            KernelVariant variant = KernelVariant::neumann);

/// Quadrature of y -> p_t(x, y) over the half space containing x,
/// truncated to the grid box. Midpoint rule on the grid nodes; when the
/// kernel width sqrt(4t) falls under four grid spacings the rule cannot
/// resolve the peak and the closed-form box integral (a product of erf
/// factors) is used instead, so the mass stays meaningful for t -> 0.
double kernel_mass(const GridSpec& spec, double t, std::span<const double> x,
                   KernelVariant variant = KernelVariant::neumann);

/// Closed-form integral of the kernel over the box-truncated half space
/// containing x (products of erf factors; exact for the continuum box).
double kernel_mass_closed_form(const GridSpec& spec, double t, std::span<const double> x,
                               KernelVariant variant = KernelVariant::neumann);

}  // namespace nhs
