#pragma once

#include <vector>

#include "nhs/grid.hpp"

namespace nhs::detail {

/// 1-D kernel shape used in a separable convolution pass.
enum class AxisKernel { gaussian, gaussian_derivative };

/// Samples k[m] of the chosen 1-D kernel at offsets m * h, m = -(N-1)..N-1,
/// returned as k[m + N - 1]. `gaussian_derivative` holds d/dw of the 1-D
/// Gaussian, used when a divergence has been moved onto the kernel.
std::vector<double> axis_kernel_samples(const GridSpec& spec, double t, AxisKernel kind);

/// In-place convolution of every grid line along `axis` with the sampled
/// 1-D kernel, scaled by the grid spacing (midpoint quadrature weight).
/// Implemented as a zero-padded FFT product, which reproduces the direct
/// truncated sum h * sum_j k[i-j] f_j exactly (up to roundoff): the
/// padding is large enough that the circular convolution never wraps.
void convolve_axis(const GridSpec& spec, std::span<double> data, int axis,
                   const std::vector<double>& kernel_samples);

/// Row mass mu[i] = h * sum_j k[i-j] of the sampled Gaussian at time t.
/// The discrete box operator applied to the constant 1 factorizes as the
/// product of these per-axis masses; dividing by it restores exact mass
/// conservation on the truncated box.
std::vector<double> axis_mass_vector(const GridSpec& spec, double t);

}  // namespace nhs::detail
