#include "nhs/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace nhs {

std::string BallFamily::descriptor() const {
    std::ostringstream os;
    os << "dyadic r=2^-j L, j=" << coarsest_level << ".." << finest_level << ", centers r/"
       << lattice_divisor << ", " << balls.size() << " balls";
    return os.str();
}

BallFamily make_ball_family(const GridSpec& spec, int coarsest_level, int finest_level,
                            int lattice_divisor) {
    spec.validate();
    if (coarsest_level < 0 || finest_level < coarsest_level)
        throw std::invalid_argument("ball family levels must satisfy 0 <= coarsest <= finest");
    if (lattice_divisor < 1) throw std::invalid_argument("lattice divisor must be >= 1");

    const double L = spec.half_width;
    const double r_min = std::ldexp(L, -finest_level);
    if (r_min < spec.spacing()) throw numeric_error("ball radius below grid spacing");
    if (!spec.time_levels.empty() && sq(r_min) < spec.time_levels.front() * (1.0 - 1e-12))
        throw numeric_error("time grid too coarse for the ball family");

    BallFamily fam;
    fam.coarsest_level = coarsest_level;
    fam.finest_level = finest_level;
    fam.lattice_divisor = lattice_divisor;
    const int n = spec.dimension;
    for (int j = coarsest_level; j <= finest_level; ++j) {
        const double r = std::ldexp(L, -j);
        const double step = r / lattice_divisor;
        const int mmax = static_cast<int>(std::floor((L - r) / step + 1e-9));
        // Odometer over the symmetric per-axis lattice {-mmax..mmax} * step.
        std::vector<int> m(n, -mmax);
        while (true) {
            std::vector<double> c(n);
            for (int a = 0; a < n; ++a) c[a] = m[a] * step;
            fam.balls.push_back({std::move(c), r});
            int a = n - 1;
            while (a >= 0 && ++m[a] > mmax) m[a--] = -mmax;
            if (a < 0) break;
        }
    }
    return fam;
}

std::vector<std::pair<int, double>> carleson_time_weights(const GridSpec& spec, double tau) {
    const auto& t = spec.time_levels;
    if (t.empty()) throw numeric_error("grid has no time levels");
    if (tau < t.front() * (1.0 - 1e-12))
        throw numeric_error("time grid too coarse for the requested Carleson box");
    tau = std::min(tau, t.back());

    // Last level inside (0, tau]; tau within relative 1e-12 of a level
    // counts as landing on it.
    int K = 0;
    while (K + 1 < static_cast<int>(t.size()) && t[K + 1] <= tau * (1.0 + 1e-12)) ++K;

    std::vector<double> w(K + 1, 0.0);
    w[0] += t[0];  // triangle on [0, sqrt(t_1)] anchored at psi(0) = 0
    for (int i = 0; i < K; ++i) {
        const double si = std::sqrt(t[i]), sj = std::sqrt(t[i + 1]);
        w[i] += (sj - si) * si;
        w[i + 1] += (sj - si) * sj;
    }
    const double s_tau = std::sqrt(tau), s_K = std::sqrt(t[K]);
    if (s_tau > s_K * (1.0 + 1e-12)) w[K] += (s_tau - s_K) * 2.0 * s_K;

    std::vector<std::pair<int, double>> out;
    out.reserve(w.size());
    for (int k = 0; k <= K; ++k) out.emplace_back(k, w[k]);
    return out;
}

SpaceTimeField time_derivative(const SpaceTimeField& u) {
    const auto& t = u.spec.time_levels;
    const int M = u.levels();
    if (M < 2) throw numeric_error("time derivative needs at least two levels");
    SpaceTimeField d(u.spec);
    const long sz = u.slice[0].size();

    // Derivative of the interpolating parabola through three consecutive
    // levels; exact on fields quadratic in t.
    auto combine = [&](int k, int i0, int i1, int i2, double c0, double c1, double c2) {
        const auto& f0 = u.slice[i0];
        const auto& f1 = u.slice[i1];
        const auto& f2 = u.slice[i2];
        ScalarField& out = d.slice[k];
        for (long i = 0; i < sz; ++i) out[i] = c0 * f0[i] + c1 * f1[i] + c2 * f2[i];
    };

    if (M == 2) {
        const double dt = t[1] - t[0];
        for (long i = 0; i < sz; ++i) {
            const double slope = (u.slice[1][i] - u.slice[0][i]) / dt;
            d.slice[0][i] = slope;
            d.slice[1][i] = slope;
        }
        return d;
    }
    for (int k = 0; k < M; ++k) {
        if (k == 0) {
            const double a = t[1] - t[0], b = t[2] - t[1];
            combine(k, 0, 1, 2, -(2.0 * a + b) / (a * (a + b)), (a + b) / (a * b),
                    -a / (b * (a + b)));
        } else if (k == M - 1) {
            const double a = t[M - 2] - t[M - 3], b = t[M - 1] - t[M - 2];
            combine(k, M - 3, M - 2, M - 1, b / (a * (a + b)), -(a + b) / (a * b),
                    (2.0 * b + a) / (b * (a + b)));
        } else {
            const double a = t[k] - t[k - 1], b = t[k + 1] - t[k];
            combine(k, k - 1, k, k + 1, -b / (a * (a + b)), (b - a) / (a * b),
                    a / (b * (a + b)));
        }
    }
    return d;
}

namespace {

// Per-ball values computed independently (parallel over balls), then a
// serial max: the result is identical for every thread count.
template <typename PerBall>
double family_max(const BallFamily& fam, const PerBall& per_ball) {
    if (fam.empty()) throw numeric_error("empty ball family");
    const long n = static_cast<long>(fam.balls.size());
    std::vector<double> vals(n, 0.0);
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long b = 0; b < n; ++b) guard.run([&, b] { vals[b] = per_ball(fam.balls[b]); });
    guard.rethrow_if_failed();
    double m = 0.0;
    for (double v : vals) m = std::max(m, v);
    return m;
}

template <typename PointFn>
double pairwise_over(const std::vector<long>& nodes, const ScalarField& f, const PointFn& g) {
    std::vector<double> buf(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) buf[i] = g(f[nodes[i]]);
    return pairwise_sum(buf);
}

}  // namespace

double bmo_neumann_norm(const ScalarField& f, const BallFamily& fam) {
    if (fam.empty()) throw numeric_error("empty ball family");
    const GridSpec& g = f.spec();

    // One heat flow per distinct radius, shared by all balls at that scale.
    std::map<double, ScalarField> flow;
    for (const auto& ball : fam.balls)
        if (!flow.count(ball.radius)) flow.emplace(ball.radius, neumann_extend(f, sq(ball.radius)));

    return family_max(fam, [&](const ParabolicBall& ball) {
        const ScalarField& smoothed = flow.at(ball.radius);
        const auto nodes = ball_nodes(g, ball.center, ball.radius);
        if (nodes.empty()) throw numeric_error("empty quadrature region");
        std::vector<double> diff(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i)
            diff[i] = std::abs(f[nodes[i]] - smoothed[nodes[i]]);
        return pairwise_sum(diff) / static_cast<double>(nodes.size());
    });
}

double classical_bmo_norm(const ScalarField& f, const BallFamily& fam) {
    const GridSpec& g = f.spec();
    return family_max(fam, [&](const ParabolicBall& ball) {
        const auto nodes = ball_nodes(g, ball.center, ball.radius);
        if (nodes.empty()) throw numeric_error("empty quadrature region");
        const double avg =
            pairwise_over(nodes, f, [](double v) { return v; }) / static_cast<double>(nodes.size());
        std::vector<double> diff(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i) diff[i] = std::abs(f[nodes[i]] - avg);
        return pairwise_sum(diff) / static_cast<double>(nodes.size());
    });
}

double tmo_norm(const SpaceTimeField& u, const BallFamily& fam) {
    const GridSpec& g = u.spec;
    const SpaceTimeField dt = time_derivative(u);
    std::vector<ScalarField> energy(u.levels(), ScalarField(g));
    for (int k = 0; k < u.levels(); ++k) {
        const VectorField grad = gradient(u.slice[k]);
        ScalarField& e = energy[k];
        for (long i = 0; i < e.size(); ++i) {
            double s = sq(dt.slice[k][i]);
            for (int a = 0; a < g.dimension; ++a) s += sq(grad.comp[a][i]);
            e[i] = s;
        }
    }
    const double cell = g.cell_measure();
    const double best = family_max(fam, [&](const ParabolicBall& ball) {
        const auto w = carleson_time_weights(g, sq(ball.radius));
        const auto nodes = ball_nodes(g, ball.center, ball.radius);
        std::vector<long> up, low;
        for (long i : nodes) (g.half_of(i) == HalfSpace::upper ? up : low).push_back(i);
        double acc_up = 0.0, acc_low = 0.0;
        for (auto [k, wk] : w) {
            if (!up.empty())
                acc_up += wk * pairwise_over(up, energy[k], [](double v) { return v; });
            if (!low.empty())
                acc_low += wk * pairwise_over(low, energy[k], [](double v) { return v; });
        }
        return std::pow(ball.radius, -g.dimension) * cell * std::max(acc_up, acc_low);
    });
    return std::sqrt(best);
}

double tent_inf2_norm(const SpaceTimeField& u, const BallFamily& fam) {
    const GridSpec& g = u.spec;
    const double cell = g.cell_measure();
    const double best = family_max(fam, [&](const ParabolicBall& ball) {
        const auto w = carleson_time_weights(g, sq(ball.radius));
        const auto nodes = ball_nodes(g, ball.center, ball.radius);
        double acc = 0.0;
        for (auto [k, wk] : w)
            acc += wk * pairwise_over(nodes, u.slice[k], [](double v) { return v * v; });
        return std::pow(ball.radius, -g.dimension) * cell * acc;
    });
    return std::sqrt(best);
}

double tent_inf1_norm(const SpaceTimeField& u, const BallFamily& fam) {
    const GridSpec& g = u.spec;
    const double cell = g.cell_measure();
    return family_max(fam, [&](const ParabolicBall& ball) {
        const auto w = carleson_time_weights(g, sq(ball.radius));
        const auto nodes = ball_nodes(g, ball.center, ball.radius);
        double acc = 0.0;
        for (auto [k, wk] : w)
            acc += wk * pairwise_over(nodes, u.slice[k], [](double v) { return std::abs(v); });
        return std::pow(ball.radius, -g.dimension) * cell * acc;
    });
}

double tent_12_norm(const SpaceTimeField& u) {
    const GridSpec& g = u.spec;
    const auto w = carleson_time_weights(g, g.time_levels.back());
    const double cell = g.cell_measure();
    const long nn = g.node_count();
    std::vector<double> cone(nn, 0.0);
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < nn; ++i) guard.run([&, i] {
        std::vector<double> x(g.dimension);
        g.node(i, x);
        double acc = 0.0;
        for (auto [k, wk] : w) {
            const double tk = g.time_levels[k];
            const auto nodes = ball_nodes(g, x, std::sqrt(tk));
            const double s =
                pairwise_over(nodes, u.slice[k], [](double v) { return v * v; });
            acc += wk * std::pow(tk, -(0.5 * g.dimension + 1.0)) * cell * s;
        }
        cone[i] = std::sqrt(acc);
    });
    guard.rethrow_if_failed();
    return cell * pairwise_sum(cone);
}

double bmo_inv_neumann_norm(const ScalarField& f, const BallFamily& fam) {
    return tent_inf2_norm(build_extension(f), fam);
}

double bmo_inv_classical_norm(const ScalarField& f, const BallFamily& fam) {
    return tent_inf2_norm(build_extension_whole(f), fam);
}

double weighted_linf_norm(const SpaceTimeField& u) {
    double m = 0.0;
    for (int k = 0; k < u.levels(); ++k)
        m = std::max(m, std::sqrt(u.spec.time_levels[k]) * u.slice[k].max_abs());
    return m;
}

double path_norm(const SpaceTimeField& u, const BallFamily& fam) {
    return weighted_linf_norm(u) + tent_inf2_norm(u, fam);
}

double besov_heat_norm(const ScalarField& f) {
    double m = 0.0;
    for (double t : f.spec().time_levels)
        m = std::max(m, std::sqrt(t) * heat_extend_whole(f, t).max_abs());
    return m;
}

ScalarField square_function(const ScalarField& f, SquareFnVariant variant, int time_samples) {
    const GridSpec& g = f.spec();
    if (g.time_levels.empty()) throw numeric_error("grid has no time levels");
    const int J = time_samples > 0 ? time_samples : static_cast<int>(g.time_levels.size());
    const double theta_max = std::sqrt(g.time_levels.back());
    const double dtheta = theta_max / J;

    std::vector<ScalarField> gen;
    std::vector<double> theta(J);
    gen.reserve(J);
    for (int j = 0; j < J; ++j) {
        theta[j] = (j + 0.5) * dtheta;
        const double tt = sq(theta[j]);
        ScalarField lap = (variant == SquareFnVariant::neumann)
                              ? laplacian_neumann(neumann_extend(f, tt))
                              : laplacian_whole(heat_extend_whole(f, tt));
        lap.scale(tt);
        gen.push_back(std::move(lap));
    }

    const double cell = g.cell_measure();
    ScalarField out(g);
    const long nn = g.node_count();
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < nn; ++i) guard.run([&, i] {
        std::vector<double> x(g.dimension);
        g.node(i, x);
        double acc = 0.0;
        for (int j = 0; j < J; ++j) {
            const auto nodes = ball_nodes(g, x, theta[j]);
            const double s = pairwise_over(nodes, gen[j], [](double v) { return v * v; });
            acc += dtheta * std::pow(theta[j], -(g.dimension + 1.0)) * cell * s;
        }
        out[i] = std::sqrt(acc);
    });
    guard.rethrow_if_failed();
    return out;
}

double hardy_norm(const ScalarField& f, int time_samples) {
    const ScalarField s = square_function(f, SquareFnVariant::neumann, time_samples);
    return f.spec().cell_measure() * pairwise_sum(s.data());
}

double square_fn_l1_norm(const ScalarField& f, int time_samples) {
    const ScalarField s = square_function(f, SquareFnVariant::classical, time_samples);
    return f.spec().cell_measure() * pairwise_sum(s.data());
}

bool NormReport::finite() const {
    for (double v : {bmo_N, tmo, tent_inf2, tent_inf1, tent_12, bmo_inv_N, weighted_linf, path_eps,
                     hardy, square_fn_l1})
        if (!(std::isfinite(v) && v >= 0.0)) return false;
    return true;
}

NormReport compute_norm_report(const ScalarField& f, const BallFamily& fam) {
    NormReport r;
    const SpaceTimeField u = build_extension(f);
    r.bmo_N = bmo_neumann_norm(f, fam);
    r.tmo = tmo_norm(u, fam);
    r.tent_inf2 = tent_inf2_norm(u, fam);
    r.tent_inf1 = tent_inf1_norm(u, fam);
    r.tent_12 = tent_12_norm(u);
    r.bmo_inv_N = r.tent_inf2;  // the extension of f is the tent-space input
    r.weighted_linf = weighted_linf_norm(u);
    r.path_eps = r.weighted_linf + r.tent_inf2;
    r.hardy = hardy_norm(f);
    r.square_fn_l1 = square_fn_l1_norm(f);
    r.ball_family = fam.descriptor();
    r.grid = describe(f.spec());
    return r;
}

}  // namespace nhs
