#include "nhs/reference.hpp"

#include <algorithm>
#include <cmath>

#include "nhs/kernel.hpp"

namespace nhs::ref {

namespace {

using Kernel = double (*)(double, std::span<const double>, std::span<const double>);

double whole_kernel(double t, std::span<const double> x, std::span<const double> y) {
    std::vector<double> d(x.size());
    for (size_t a = 0; a < x.size(); ++a) d[a] = x[a] - y[a];
    return gaussian_kernel(static_cast<int>(x.size()), t, d);
}

ScalarField direct_flow(const ScalarField& f, double t, const ExtendOptions& opt, Kernel kernel) {
    if (t <= 0.0) throw std::domain_error("heat flow needs t > 0");
    const GridSpec& g = f.spec();
    const double cell = g.cell_measure();
    ScalarField out(g);
    std::vector<double> x(g.dimension), y(g.dimension);
    for (long i = 0; i < f.size(); ++i) {
        g.node(i, x);
        double num = 0.0, mass = 0.0;
        for (long j = 0; j < f.size(); ++j) {
            g.node(j, y);
            const double p = kernel(t, x, y);
            num += p * f[j];
            mass += p;
        }
        out[i] = opt.normalize ? num / mass : cell * num;
    }
    return out;
}

}  // namespace

ScalarField heat_extend_direct(const ScalarField& f, double t, const ExtendOptions& opt) {
    return direct_flow(f, t, opt, &whole_kernel);
}

ScalarField neumann_extend_direct(const ScalarField& f, double t, const ExtendOptions& opt) {
    // neumann_kernel vanishes across the interface, so summing over the
    // whole box quadratures exactly the half space containing each node.
    return direct_flow(f, t, opt,
                       +[](double tt, std::span<const double> x, std::span<const double> y) {
                           return neumann_kernel(tt, x, y);
                       });
}

double bmo_neumann_norm_direct(const ScalarField& f, const BallFamily& fam) {
    if (fam.empty()) throw numeric_error("empty ball family");
    const GridSpec& g = f.spec();
    double best = 0.0;
    double last_radius = -1.0;
    ScalarField smoothed;
    for (const auto& ball : fam.balls) {
        if (ball.radius != last_radius) {
            smoothed = neumann_extend_direct(f, sq(ball.radius));
            last_radius = ball.radius;
        }
        const auto nodes = ball_nodes(g, ball.center, ball.radius);
        if (nodes.empty()) throw numeric_error("empty quadrature region");
        double acc = 0.0;
        for (long i : nodes) acc += std::abs(f[i] - smoothed[i]);
        best = std::max(best, acc / static_cast<double>(nodes.size()));
    }
    return best;
}

double tent_inf2_norm_direct(const SpaceTimeField& u, const BallFamily& fam) {
    if (fam.empty()) throw numeric_error("empty ball family");
    const GridSpec& g = u.spec;
    const double cell = g.cell_measure();
    double best = 0.0;
    for (const auto& ball : fam.balls) {
        const auto w = carleson_time_weights(g, sq(ball.radius));
        const auto nodes = ball_nodes(g, ball.center, ball.radius);
        double acc = 0.0;
        for (auto [k, wk] : w) {
            double s = 0.0;
            for (long i : nodes) s += sq(u.slice[k][i]);
            acc += wk * s;
        }
        best = std::max(best, std::pow(ball.radius, -g.dimension) * cell * acc);
    }
    return std::sqrt(best);
}

SpaceTimeField explicit_stepper(const ScalarField& u0, std::span<const double> b,
                                double stability) {
    const GridSpec& g = u0.spec();
    g.validate();
    if (static_cast<int>(b.size()) != g.dimension)
        throw std::invalid_argument("drift direction dimension mismatch");
    if (g.time_levels.empty()) throw numeric_error("grid has no time levels");
    const int N = g.points_per_axis;
    const double h = g.spacing();
    const double dt_max = stability * h * h / (2.0 * g.dimension);

    ScalarField u = u0;
    ScalarField rhs(g);
    SpaceTimeField out(g);

    // One conservative Euler step: for every axis, difference the face
    // fluxes (u_x - b_a u^2 at cell faces, zero at segment ends).
    auto step = [&](double dt) {
        rhs.fill(0.0);
        for (int axis = 0; axis < g.dimension; ++axis) {
            long stride = 1;
            for (int a = g.dimension - 1; a > axis; --a) stride *= N;
            const long lines = g.node_count() / N;
            const long inner = stride;
            const bool split = (axis == g.dimension - 1);
            for (long l = 0; l < lines; ++l) {
                const long base = (l / inner) * inner * N + (l % inner);
                auto at = [&](long i) { return u[base + i * stride]; };
                auto segment = [&](long s, long e) {
                    double left_flux = 0.0;  // no flux through the segment end
                    for (long i = s; i < e; ++i) {
                        double right_flux = 0.0;
                        if (i + 1 < e)
                            right_flux = (at(i + 1) - at(i)) / h -
                                         b[axis] * 0.5 * (sq(at(i)) + sq(at(i + 1)));
                        rhs[base + i * stride] += (right_flux - left_flux) / h;
                        left_flux = right_flux;
                    }
                };
                if (split) {
                    segment(0, N / 2);
                    segment(N / 2, N);
                } else {
                    segment(0, N);
                }
            }
        }
        u.add_scaled(rhs, dt);
    };

    double now = 0.0;
    for (int k = 0; k < static_cast<int>(g.time_levels.size()); ++k) {
        const double target = g.time_levels[k];
        const double span = target - now;
        const int substeps = std::max(1, static_cast<int>(std::ceil(span / dt_max)));
        const double dt = span / substeps;
        for (int s = 0; s < substeps; ++s) step(dt);
        now = target;
        if (!u.finite()) throw numeric_error("explicit stepper blew up");
        out.slice[k] = u;
    }
    return out;
}

}  // namespace nhs::ref
