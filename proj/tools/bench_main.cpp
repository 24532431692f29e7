// Timing comparison between the parallel/spectral production paths and
// the serial direct-quadrature reference implementations, with the
// max-abs disagreement printed beside each timing so speed never hides a
// correctness regression.
//
//   nhs_bench [points_per_axis] [repeats]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "nhs/grid.hpp"
#include "nhs/norms.hpp"
#include "nhs/reference.hpp"
#include "nhs/semigroup.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int repeats) {
    std::vector<double> samples;
    samples.reserve(repeats);
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];  // median
}

void print_row(const std::string& op, double fast_ms, double ref_ms, double diff) {
    std::printf("%-28s %10.3f %12.3f %9.2fx %12.3e\n", op.c_str(), fast_ms, ref_ms,
                ref_ms / std::max(fast_ms, 1e-9), diff);
}

}  // namespace

int main(int argc, char** argv) {
    const int N = argc > 1 ? std::atoi(argv[1]) : 256;
    const int repeats = argc > 2 ? std::max(1, std::atoi(argv[2])) : 3;
    if (N < 4 || N % 2 != 0) {
        std::fprintf(stderr, "points_per_axis must be even and >= 4\n");
        return 1;
    }

    nhs::GridSpec grid;
    grid.dimension = 1;
    grid.half_width = 1.0;
    grid.points_per_axis = N;
    grid.time_levels = nhs::GridSpec::graded_levels(0.25, 16);
    grid.validate();

    const nhs::ScalarField f(grid, [](std::span<const double> x) {
        return std::exp(-(x[0] * x[0]) / 0.09) + 0.3 * std::tanh(x[0] / 0.2);
    });
    const double t = 0.01;

    std::printf("grid: %s, repeats: %d (median)\n\n", nhs::describe(grid).c_str(), repeats);
    std::printf("%-28s %10s %12s %9s %12s\n", "operation", "fast ms", "reference ms", "speedup",
                "max |diff|");

    {
        nhs::ScalarField fast, ref;
        const double fast_ms = time_ms([&] { fast = nhs::heat_extend_whole(f, t); }, repeats);
        const double ref_ms = time_ms([&] { ref = nhs::ref::heat_extend_direct(f, t); }, repeats);
        print_row("heat_extend_whole", fast_ms, ref_ms, (fast - ref).max_abs());
    }
    {
        nhs::ScalarField fast, ref;
        const double fast_ms = time_ms([&] { fast = nhs::neumann_extend(f, t); }, repeats);
        const double ref_ms =
            time_ms([&] { ref = nhs::ref::neumann_extend_direct(f, t); }, repeats);
        print_row("neumann_extend", fast_ms, ref_ms, (fast - ref).max_abs());
    }

    const nhs::BallFamily fam = nhs::make_ball_family(grid, 1, 3, 2);
    {
        double fast = 0.0, ref = 0.0;
        const double fast_ms = time_ms([&] { fast = nhs::bmo_neumann_norm(f, fam); }, repeats);
        const double ref_ms =
            time_ms([&] { ref = nhs::ref::bmo_neumann_norm_direct(f, fam); }, repeats);
        print_row("bmo_neumann_norm", fast_ms, ref_ms, std::abs(fast - ref));
    }
    {
        const nhs::SpaceTimeField u = nhs::build_extension(f);
        double fast = 0.0, ref = 0.0;
        const double fast_ms = time_ms([&] { fast = nhs::tent_inf2_norm(u, fam); }, repeats);
        const double ref_ms =
            time_ms([&] { ref = nhs::ref::tent_inf2_norm_direct(u, fam); }, repeats);
        print_row("tent_inf2_norm", fast_ms, ref_ms, std::abs(fast - ref));
    }

    return 0;
}
