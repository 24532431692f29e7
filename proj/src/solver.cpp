#include "nhs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nhs {

namespace {

int sigma_point_count(const DuhamelOptions& opt, const GridSpec& spec) {
    return opt.sigma_points > 0 ? opt.sigma_points
                                : 2 * static_cast<int>(spec.time_levels.size());
}

/// Dense per-level weight array from the sparse carleson_time_weights.
std::vector<double> dense_weights(const GridSpec& spec, double tau) {
    std::vector<double> w(spec.time_levels.size(), 0.0);
    for (const auto& [level, weight] : carleson_time_weights(spec, tau)) w[level] += weight;
    return w;
}

}  // namespace

std::vector<double> SolverConfig::resolved_direction(int dimension) const {
    if (direction.empty()) {
        std::vector<double> b(dimension, 0.0);
        b[0] = 1.0;
        return b;
    }
    if (static_cast<int>(direction.size()) != dimension)
        throw numeric_error("nonlinearity direction has wrong dimension");
    double norm2 = 0.0;
    for (double c : direction) norm2 += c * c;
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw numeric_error("nonlinearity direction must be a unit vector");
    return direction;
}

TimeIndexedVectorField quadratic_forcing(const SpaceTimeField& u, std::span<const double> b) {
    TimeIndexedVectorField alpha(u.spec);
    const int M = u.levels();
    for (int k = 0; k < M; ++k) {
        const ScalarField& slice = u.slice[k];
        for (int j = 0; j < u.spec.dimension; ++j) {
            ScalarField& comp = alpha.slice[k].comp[j];
            for (long i = 0; i < slice.size(); ++i) comp[i] = b[j] * slice[i] * slice[i];
        }
    }
    return alpha;
}

SpaceTimeField bilinear_A(const TimeIndexedVectorField& alpha, const DuhamelOptions& opt) {
    SpaceTimeField out(alpha.spec);
    const int M = alpha.levels();
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < M; ++k)
        guard.run([&, k] { out.slice[k] = duhamel_divergence(alpha, alpha.spec.time_levels[k], opt); });
    guard.rethrow_if_failed();
    return out;
}

SplitA split_A(const TimeIndexedVectorField& alpha, const BallFamily& fam,
               const DuhamelOptions& opt) {
    const GridSpec& spec = alpha.spec;
    const int M = alpha.levels();
    const int Q = sigma_point_count(opt, spec);
    const double horizon = spec.time_levels.back();

    SplitA out;
    out.a1 = SpaceTimeField(spec);
    out.a2 = SpaceTimeField(spec);
    out.a3 = SpaceTimeField(spec);
    out.a = SpaceTimeField(spec);

    const std::vector<double> w_full = dense_weights(spec, horizon);

    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < M; ++k) guard.run([&, k] {
        const double t = spec.time_levels[k];

        // a and a1 on the shared s = t(1 - sigma^2) midpoint mesh: their
        // e^{(t-s)Lap} terms are the same summands and cancel exactly in
        // the reconstruction defect.
        for (int q = 0; q < Q; ++q) {
            const double sigma = (q + 0.5) / Q;
            const double s = t * (1.0 - sigma * sigma);
            const double w = 2.0 * t * sigma / Q;
            const VectorField at_s = vector_slice_at(alpha, s);
            const ScalarField near_part =
                apply_divergence_semigroup(at_s, t - s, opt.path);
            const ScalarField far_part =
                apply_divergence_semigroup(at_s, t + s, opt.path);
            out.a.slice[k].add_scaled(near_part, w);
            out.a1.slice[k].add_scaled(near_part, w);
            out.a1.slice[k].add_scaled(far_part, -w);
        }

        // a2 integrates the (t+s) flow over the whole sampled horizon,
        // a3 removes the [t, T] part; both reuse the same per-level
        // evaluations g_m = e^{(t + t_m) Lap_N} div alpha(t_m).
        const std::vector<double> w_head = dense_weights(spec, t);
        for (int m = 0; m < M; ++m) {
            const double tail_weight = w_full[m] - w_head[m];
            if (w_full[m] == 0.0 && tail_weight == 0.0) continue;
            const ScalarField g =
                apply_divergence_semigroup(alpha.slice[m], t + spec.time_levels[m], opt.path);
            out.a2.slice[k].add_scaled(g, w_full[m]);
            out.a3.slice[k].add_scaled(g, -tail_weight);
        }
    });
    guard.rethrow_if_failed();

    SpaceTimeField recombined = out.a1;
    for (int k = 0; k < M; ++k) {
        recombined.slice[k].add_scaled(out.a2.slice[k], 1.0);
        recombined.slice[k].add_scaled(out.a3.slice[k], 1.0);
    }
    const double defect = path_norm(recombined - out.a, fam);
    const double base = path_norm(out.a, fam);
    if (base > 0.0)
        out.reconstruction_defect = defect / base;
    else
        out.reconstruction_defect =
            defect > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return out;
}

SpaceTimeField operator_T(const TimeIndexedVectorField& F, const DuhamelOptions& opt) {
    const GridSpec& spec = F.spec;
    const int M = F.levels();
    const int Q = sigma_point_count(opt, spec);
    SpaceTimeField out(spec);
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < M; ++k) guard.run([&, k] {
        const double s = spec.time_levels[k];
        // mu = 2 s nu^2 turns -s^{-1/2} int_0^{2s} ... d mu into the
        // bounded midpoint sum below (d mu = 4 s nu d nu).
        for (int q = 0; q < Q; ++q) {
            const double nu = (q + 0.5) / Q;
            const double mu = 2.0 * s * nu * nu;
            const double w = -4.0 * std::sqrt(s) * nu / Q;
            out.slice[k].add_scaled(apply_divergence_semigroup(F.slice[k], mu, opt.path), w);
        }
    });
    guard.rethrow_if_failed();
    return out;
}

SpaceTimeField operator_R(const TimeIndexedVectorField& F, const DuhamelOptions& opt) {
    const GridSpec& spec = F.spec;
    const int M = F.levels();
    const int Q = sigma_point_count(opt, spec);
    const double sqrt_T = std::sqrt(spec.time_levels.back());
    SpaceTimeField out(spec);
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < M; ++k) guard.run([&, k] {
        const double s = spec.time_levels[k];
        const double lo = std::sqrt(s);
        const double width = sqrt_T - lo;
        if (width <= 0.0) return;  // empty integral at the horizon
        // tau = sigma^2 absorbs the tau^{-1/2} weight: the integrand
        // becomes 2 e^{(s + sigma^2) Lap_N} div F(sigma^2).
        for (int q = 0; q < Q; ++q) {
            const double sigma = lo + (q + 0.5) * width / Q;
            const double w = 2.0 * width / Q;
            out.slice[k].add_scaled(
                apply_divergence_semigroup(vector_slice_at(F, sigma * sigma), s + sigma * sigma,
                                           opt.path),
                w);
        }
    });
    guard.rethrow_if_failed();
    return out;
}

SpaceTimeField maximal_regularity(const SpaceTimeField& F, int sigma_points) {
    const GridSpec& spec = F.spec;
    const int M = F.levels();
    const int Q =
        sigma_points > 0 ? sigma_points : 2 * static_cast<int>(spec.time_levels.size());
    SpaceTimeField out(spec);
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < M; ++k) guard.run([&, k] {
        const double t = spec.time_levels[k];
        for (int q = 0; q < Q; ++q) {
            const double sigma = (q + 0.5) / Q;
            const double s = t * (1.0 - sigma * sigma);
            const double tau = t - s;
            const double w = 2.0 * t * sigma / Q;
            // L e^{-tau L} with L = -Lap_N: minus the split-stencil
            // Laplacian of the zero-flux flow.
            out.slice[k].add_scaled(
                laplacian_neumann(neumann_extend(scalar_slice_at(F, s), tau)), -w);
        }
    });
    guard.rethrow_if_failed();
    return out;
}

SpaceTimeField theta(const SpaceTimeField& u, const ScalarField& u0, const SolverConfig& cfg) {
    const std::vector<double> b = cfg.resolved_direction(u.spec.dimension);
    SpaceTimeField out = build_extension(u0);
    const SpaceTimeField a = bilinear_A(quadratic_forcing(u, b), cfg.duhamel);
    for (int k = 0; k < out.levels(); ++k) out.slice[k].add_scaled(a.slice[k], -1.0);
    return out;
}

SolverResult picard_solve(const ScalarField& u0, const SolverConfig& cfg, const BallFamily& fam) {
    if (cfg.convergence_tol <= 0.0) throw numeric_error("convergence tolerance must be positive");
    if (cfg.max_iterations < 1) throw numeric_error("iteration budget must be at least 1");
    const std::vector<double> b = cfg.resolved_direction(u0.spec().dimension);

    const ScalarField scaled = cfg.data_scale * u0;
    const SpaceTimeField free_flow = build_extension(scaled);

    SolverResult result;
    SolverDiagnostics& diag = result.diagnostics;
    SpaceTimeField current = free_flow;
    double prev_increment = 0.0;
    int growth_streak = 0;
    diag.verdict = "max-iter";

    for (int k = 1; k <= cfg.max_iterations; ++k) {
        SpaceTimeField next = free_flow;
        const SpaceTimeField a = bilinear_A(quadratic_forcing(current, b), cfg.duhamel);
        for (int m = 0; m < next.levels(); ++m) next.slice[m].add_scaled(a.slice[m], -1.0);
        if (!next.finite()) throw numeric_error("blow-up detected");

        IterationRecord rec;
        rec.k = k;
        rec.increment = path_norm(next - current, fam);
        rec.norm = path_norm(next, fam);
        if (k >= 2 && prev_increment > 0.0) rec.ratio = rec.increment / prev_increment;
        diag.iterations.push_back(rec);

        if (k >= 2 && rec.increment > prev_increment)
            ++growth_streak;
        else
            growth_streak = 0;

        current = std::move(next);
        if (growth_streak >= 3) {
            diag.verdict = "diverged";
            break;
        }
        if (rec.increment < cfg.convergence_tol) {
            diag.verdict = "converged";
            break;
        }
        prev_increment = rec.increment;
    }

    for (const IterationRecord& rec : diag.iterations)
        diag.contraction_estimate = std::max(diag.contraction_estimate, rec.ratio);

    // Honest residual: one extra application of the fixed-point map.
    SpaceTimeField mapped = free_flow;
    const SpaceTimeField a = bilinear_A(quadratic_forcing(current, b), cfg.duhamel);
    for (int m = 0; m < mapped.levels(); ++m) mapped.slice[m].add_scaled(a.slice[m], -1.0);
    diag.residual = path_norm(current - mapped, fam);

    result.u = std::move(current);
    return result;
}

double residual(const SpaceTimeField& u, const ScalarField& u0, const SolverConfig& cfg,
                const BallFamily& fam) {
    const ScalarField scaled = cfg.data_scale * u0;
    return path_norm(u - theta(u, scaled, cfg), fam);
}

double contraction_factor(const SpaceTimeField& u, const SpaceTimeField& v,
                          const ScalarField& u0, const SolverConfig& cfg,
                          const BallFamily& fam) {
    (void)u0;  // Theta(u) - Theta(v) = A(b v^2) - A(b u^2): the caloric term drops out
    const double denom = path_norm(u - v, fam);
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> b = cfg.resolved_direction(u.spec.dimension);
    const SpaceTimeField au = bilinear_A(quadratic_forcing(u, b), cfg.duhamel);
    const SpaceTimeField av = bilinear_A(quadratic_forcing(v, b), cfg.duhamel);
    return path_norm(av - au, fam) / denom;
}

}  // namespace nhs
