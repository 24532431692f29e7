#include "nhs/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "nhs/conv.hpp"

namespace nhs {

namespace {

constexpr double kPi = 3.14159265358979323846;

using detail::AxisKernel;

ScalarField whole_raw(const ScalarField& f, double t) {
    ScalarField out = f;
    const auto k = detail::axis_kernel_samples(f.spec(), t, AxisKernel::gaussian);
    for (int a = 0; a < f.spec().dimension; ++a) detail::convolve_axis(f.spec(), out.data(), a, k);
    return out;
}

void divide_by_row_mass(ScalarField& u, double t) {
    const GridSpec& g = u.spec();
    const auto mu = detail::axis_mass_vector(g, t);
    const int n = g.dimension;
    const int N = g.points_per_axis;
    auto data = u.data();
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < static_cast<long>(data.size()); ++i) guard.run([&, i] {
        long rest = i;
        double m = 1.0;
        for (int a = n - 1; a >= 0; --a) {
            m *= mu[rest % N];
            rest /= N;
        }
        data[i] /= m;
    });
    guard.rethrow_if_failed();
}

}  // namespace

ScalarField heat_extend_whole(const ScalarField& f, double t, const ExtendOptions& opt) {
    ScalarField out = whole_raw(f, t);
    if (opt.normalize) divide_by_row_mass(out, t);
    return out;
}

ScalarField neumann_extend(const ScalarField& f, double t, const ExtendOptions& opt) {
    const GridSpec& g = f.spec();
    ScalarField up = whole_raw(even_extension(f, HalfSpace::upper), t);
    ScalarField low = whole_raw(even_extension(f, HalfSpace::lower), t);
    ScalarField out(g);
    for (long i = 0; i < out.size(); ++i)
        out[i] = g.half_of(i) == HalfSpace::upper ? up[i] : low[i];
    if (opt.normalize) divide_by_row_mass(out, t);
    return out;
}

SpaceTimeField build_extension(const ScalarField& f) {
    SpaceTimeField u(f.spec());
    for (int k = 0; k < u.levels(); ++k) u.slice[k] = neumann_extend(f, f.spec().time_levels[k]);
    return u;
}

SpaceTimeField build_extension_whole(const ScalarField& f) {
    SpaceTimeField u(f.spec());
    for (int k = 0; k < u.levels(); ++k) u.slice[k] = heat_extend_whole(f, f.spec().time_levels[k]);
    return u;
}

namespace {

// Interface value of the normal component, linearly extrapolated from the
// first two rows of the given half space.
double interface_value(const ScalarField& an, long row_base, long stride, HalfSpace side) {
    // row_base indexes the node in the first row off the interface.
    const long step = (side == HalfSpace::upper) ? stride : -stride;
    return 1.5 * an[row_base] - 0.5 * an[row_base + step];
}

// Contribution of one half space under the kernel-gradient path:
//   sum_{j<n} conv_j(even extension of alpha_j)
// + conv_n(odd extension of alpha_n)
// - (interface term), with the sign of the outward normal.
// conv_j carries the Gaussian-derivative kernel along axis j and the
// plain Gaussian along the others.
ScalarField half_kernel_gradient(const VectorField& alpha, double tau, HalfSpace side) {
    const GridSpec& g = alpha.spec();
    const int n = g.dimension;
    ScalarField acc(g);
    const auto kg = detail::axis_kernel_samples(g, tau, AxisKernel::gaussian);
    const auto kd = detail::axis_kernel_samples(g, tau, AxisKernel::gaussian_derivative);
    for (int j = 0; j < n; ++j) {
        ScalarField term = (j == n - 1) ? odd_extension(alpha.comp[j], side)
                                        : even_extension(alpha.comp[j], side);
        for (int a = 0; a < n; ++a)
            detail::convolve_axis(g, term.data(), a, a == j ? kd : kg);
        acc.add_scaled(term, 1.0);
    }

    // Interface term: the nonlinear flux through x_n = 0 seen by this half
    // space. The kernel factor along the normal axis is 2 g_tau(x_n); the
    // tangential factors convolve the extrapolated row values.
    const int N = g.points_per_axis;
    const ScalarField& an = alpha.comp[n - 1];
    const long stride = 1;  // normal axis is fastest
    const int first_row = (side == HalfSpace::upper) ? N / 2 : N / 2 - 1;
    const double outward = (side == HalfSpace::upper) ? -1.0 : +1.0;

    // Row values over the tangential lattice.
    const long rows = g.node_count() / N;
    std::vector<double> row(rows);
    for (long r = 0; r < rows; ++r)
        row[r] = interface_value(an, r * N + first_row, stride, side);

    if (n == 1) {
        const double v = row[0];
        for (long i = 0; i < acc.size(); ++i) {
            const double xn = g.coord(g.normal_index(i));
            const double p = 2.0 * std::exp(-xn * xn / (4.0 * tau)) / std::sqrt(4.0 * kPi * tau);
            acc[i] += outward * p * v;  // the "- boundary" sign is folded into outward
        }
    } else {
        // Convolve the row lattice with the tangential Gaussians, then
        // spread along the normal axis with the doubled Gaussian factor.
        GridSpec row_spec = g;
        row_spec.dimension = n - 1;
        ScalarField rowf(row_spec);
        std::copy(row.begin(), row.end(), rowf.data().begin());
        const auto kgr = detail::axis_kernel_samples(row_spec, tau, AxisKernel::gaussian);
        for (int a = 0; a < n - 1; ++a) detail::convolve_axis(row_spec, rowf.data(), a, kgr);
        for (long i = 0; i < acc.size(); ++i) {
            const long r = i / N;
            const double xn = g.coord(g.normal_index(i));
            const double p = 2.0 * std::exp(-xn * xn / (4.0 * tau)) / std::sqrt(4.0 * kPi * tau);
            acc[i] += outward * p * rowf[r];
        }
    }
    return acc;
}

}  // namespace

ScalarField apply_divergence_semigroup(const VectorField& alpha, double tau, DivergencePath path) {
    const GridSpec& g = alpha.spec();
    if (!(tau > 0.0)) throw std::domain_error("apply_divergence_semigroup requires tau > 0");
    const bool resolved = tau >= sq(g.spacing());
    if (path == DivergencePath::finite_difference || !resolved)
        return neumann_extend(divergence(alpha), tau);

    ScalarField up = half_kernel_gradient(alpha, tau, HalfSpace::upper);
    ScalarField low = half_kernel_gradient(alpha, tau, HalfSpace::lower);
    ScalarField out(g);
    for (long i = 0; i < out.size(); ++i)
        out[i] = g.half_of(i) == HalfSpace::upper ? up[i] : low[i];
    return out;
}

VectorField vector_slice_at(const TimeIndexedVectorField& alpha, double s) {
    const auto& t = alpha.spec.time_levels;
    if (s <= t.front()) return alpha.slice.front();
    if (s >= t.back()) return alpha.slice.back();
    int k = static_cast<int>(std::upper_bound(t.begin(), t.end(), s) - t.begin());
    const double a = std::sqrt(t[k - 1]), b = std::sqrt(t[k]), m = std::sqrt(s);
    const double w = (m - a) / (b - a);
    VectorField out = alpha.slice[k - 1];
    for (int c = 0; c < out.dimension(); ++c) {
        out.comp[c].scale(1.0 - w);
        out.comp[c].add_scaled(alpha.slice[k].comp[c], w);
    }
    return out;
}

ScalarField scalar_slice_at(const SpaceTimeField& u, double s) {
    const auto& t = u.spec.time_levels;
    if (s <= t.front()) return u.slice.front();
    if (s >= t.back()) return u.slice.back();
    int k = static_cast<int>(std::upper_bound(t.begin(), t.end(), s) - t.begin());
    const double a = std::sqrt(t[k - 1]), b = std::sqrt(t[k]), m = std::sqrt(s);
    const double w = (m - a) / (b - a);
    ScalarField out = u.slice[k - 1];
    out.scale(1.0 - w);
    out.add_scaled(u.slice[k], w);
    return out;
}

ScalarField duhamel_divergence(const TimeIndexedVectorField& alpha, double t,
                               const DuhamelOptions& opt) {
    const GridSpec& g = alpha.spec;
    if (!alpha.finite()) throw numeric_error("duhamel_divergence: forcing contains NaN");
    auto it = std::find_if(g.time_levels.begin(), g.time_levels.end(),
                           [&](double tk) { return std::abs(tk - t) <= 1e-12 * std::max(1.0, tk); });
    if (it == g.time_levels.end())
        throw std::invalid_argument("duhamel_divergence: t must coincide with a time level");

    const int Q = opt.sigma_points > 0 ? opt.sigma_points : 2 * static_cast<int>(g.time_levels.size());
    ScalarField acc(g);
    for (int q = 0; q < Q; ++q) {
        const double sigma = (q + 0.5) / Q;
        const double s = t * (1.0 - sigma * sigma);
        const double tau = t - s;  // = t sigma^2
        const double weight = 2.0 * t * sigma / Q;
        acc.add_scaled(apply_divergence_semigroup(vector_slice_at(alpha, s), tau, opt.path), weight);
    }
    return acc;
}

}  // namespace nhs
