#include "nhs/kernel.hpp"

#include <cmath>

namespace nhs {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_t(double t) {
    if (!(t > 0.0)) throw std::domain_error("heat kernel requires t > 0");
}

double gauss1(double t, double w) { return std::exp(-w * w / (4.0 * t)) / std::sqrt(4.0 * kPi * t); }

// Side classification with the interface itself counted as both sides:
// x_n y_n >= 0 means "not opposite".
bool opposite_sides(double xn, double yn) { return xn * yn < 0.0; }

double image_kernel(double t, std::span<const double> x, std::span<const double> y, double sign) {
    check_t(t);
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("kernel point dimension mismatch");
    const int n = static_cast<int>(x.size());
    if (opposite_sides(x[n - 1], y[n - 1])) return 0.0;
    double tangential = 1.0;
    for (int a = 0; a < n - 1; ++a) tangential *= gauss1(t, x[a] - y[a]);
    double normal = gauss1(t, x[n - 1] - y[n - 1]) + sign * gauss1(t, x[n - 1] + y[n - 1]);
    return tangential * normal;
}

}  // namespace

double gaussian_kernel(int dimension, double t, std::span<const double> x) {
    check_t(t);
    if (static_cast<int>(x.size()) != dimension) throw std::invalid_argument("gaussian point dimension mismatch");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return std::exp(-r2 / (4.0 * t)) * std::pow(4.0 * kPi * t, -0.5 * dimension);
}

double neumann_kernel(double t, std::span<const double> x, std::span<const double> y) {
    return image_kernel(t, x, y, +1.0);
}

double dirichlet_kernel(double t, std::span<const double> x, std::span<const double> y) {
    return image_kernel(t, x, y, -1.0);
}

double heat_kernel(const KernelQuery& q) {
    switch (q.variant) {
        case KernelVariant::neumann:
            return neumann_kernel(q.t, q.x, q.y);
        case KernelVariant::dirichlet:
            return dirichlet_kernel(q.t, q.x, q.y);
        case KernelVariant::whole_space: {
            std::vector<double> d(q.x.size());
            for (size_t a = 0; a < d.size(); ++a) d[a] = q.x[a] - q.y[a];
            return gaussian_kernel(static_cast<int>(d.size()), q.t, d);
        }
    }
    throw std::logic_error("unknown kernel variant");
}

std::vector<double> neumann_kernel_gradient(double t, std::span<const double> x,
                                            std::span<const double> y, KernelVariant variant) {
    check_t(t);
    const int n = static_cast<int>(x.size());
    std::vector<double> grad(n, 0.0);
    if (variant == KernelVariant::whole_space) {
        std::vector<double> d(x.size());
        for (int a = 0; a < n; ++a) d[a] = x[a] - y[a];
        double p = gaussian_kernel(n, t, d);
        for (int a = 0; a < n; ++a) grad[a] = -d[a] / (2.0 * t) * p;
        return grad;
    }
    if (opposite_sides(x[n - 1], y[n - 1])) return grad;
    const double sign = variant == KernelVariant::neumann ? +1.0 : -1.0;
    double tangential = 1.0;
    for (int a = 0; a < n - 1; ++a) tangential *= gauss1(t, x[a] - y[a]);
    const double wm = x[n - 1] - y[n - 1], wp = x[n - 1] + y[n - 1];
    const double gm = gauss1(t, wm), gp = gauss1(t, wp);
    const double normal = gm + sign * gp;
    const double p = tangential * normal;
    for (int a = 0; a < n - 1; ++a) grad[a] = -(x[a] - y[a]) / (2.0 * t) * p;
    grad[n - 1] = tangential * (-wm / (2.0 * t) * gm - sign * wp / (2.0 * t) * gp);
    return grad;
}

namespace {

// integral over [lo, hi] of gauss1(t, w - c) dw
double gauss1_box_integral(double t, double c, double lo, double hi) {
    const double s = std::sqrt(4.0 * t);
    return 0.5 * (std::erf((hi - c) / s) - std::erf((lo - c) / s));
}

}  // namespace

double kernel_mass_closed_form(const GridSpec& spec, double t, std::span<const double> x,
                               KernelVariant variant) {
    check_t(t);
    const int n = spec.dimension;
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("kernel_mass point dimension mismatch");
    const double L = spec.half_width;
    if (variant == KernelVariant::whole_space) {
        double m = 1.0;
        for (int a = 0; a < n; ++a) m *= gauss1_box_integral(t, x[a], -L, L);
        return m;
    }
    const double sign = variant == KernelVariant::neumann ? +1.0 : -1.0;
    double tangential = 1.0;
    for (int a = 0; a < n - 1; ++a) tangential *= gauss1_box_integral(t, x[a], -L, L);
    const double xn = x[n - 1];
    double lo = xn >= 0.0 ? 0.0 : -L;
    double hi = xn >= 0.0 ? L : 0.0;
    double normal = gauss1_box_integral(t, xn, lo, hi) + sign * gauss1_box_integral(t, -xn, lo, hi);
    return tangential * normal;
}

double kernel_mass(const GridSpec& spec, double t, std::span<const double> x, KernelVariant variant) {
    check_t(t);
    const int n = spec.dimension;
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("kernel_mass point dimension mismatch");
    if (std::sqrt(4.0 * t) < 4.0 * spec.spacing())
        return kernel_mass_closed_form(spec, t, x, variant);

    const HalfSpace side = x[n - 1] >= 0.0 ? HalfSpace::upper : HalfSpace::lower;
    std::vector<double> vals;
    vals.reserve(spec.node_count() / 2);
    std::vector<double> y(n);
    KernelQuery q;
    q.t = t;
    q.x.assign(x.begin(), x.end());
    q.variant = variant;
    for (long i = 0; i < spec.node_count(); ++i) {
        if (variant != KernelVariant::whole_space && spec.half_of(i) != side) continue;
        spec.node(i, y);
        q.y = y;
        vals.push_back(heat_kernel(q));
    }
    return spec.cell_measure() * pairwise_sum(vals);
}

}  // namespace nhs
