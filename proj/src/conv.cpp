#include "nhs/conv.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

namespace nhs::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;

int padded_size(int N) {
    int P = 1;
    while (P < 2 * N) P *= 2;
    return P;
}

// FFTW planning is not thread safe; executing a plan on its own arrays is.
// Each thread keeps one workspace per transform size, so plans are built
// under the lock once and executed lock-free afterwards.
std::mutex plan_mutex;

struct Workspace {
    int P = 0;
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd{}, bwd{};

    explicit Workspace(int P_) : P(P_) {
        std::lock_guard<std::mutex> lock(plan_mutex);
        real = fftw_alloc_real(P);
        spec = fftw_alloc_complex(P / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(P, real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(P, spec, real, FFTW_ESTIMATE);
    }
    ~Workspace() {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
};

Workspace& workspace_for(int P) {
    thread_local std::map<int, std::unique_ptr<Workspace>> cache;
    auto& slot = cache[P];
    if (!slot) slot = std::make_unique<Workspace>(P);
    return *slot;
}

// Spectrum of the kernel laid out for circular convolution: offset m >= 0
// at index m, offset m < 0 wrapped to P + m. The gap in between stays
// zero, which is what makes the padded circular product equal the
// truncated linear sum for every in-box output index.
std::vector<std::complex<double>> kernel_spectrum(const std::vector<double>& k, int N, int P) {
    Workspace& ws = workspace_for(P);
    for (int i = 0; i < P; ++i) ws.real[i] = 0.0;
    for (int m = 0; m < N; ++m) ws.real[m] = k[m + N - 1];
    for (int m = 1; m < N; ++m) ws.real[P - m] = k[N - 1 - m];
    fftw_execute(ws.fwd);
    std::vector<std::complex<double>> out(P / 2 + 1);
    for (int i = 0; i <= P / 2; ++i) out[i] = {ws.spec[i][0], ws.spec[i][1]};
    return out;
}

}  // namespace

std::vector<double> axis_kernel_samples(const GridSpec& spec, double t, AxisKernel kind) {
    if (!(t > 0.0)) throw std::domain_error("axis kernel requires t > 0");
    const int N = spec.points_per_axis;
    const double h = spec.spacing();
    std::vector<double> k(2 * N - 1);
    const double norm = 1.0 / std::sqrt(4.0 * kPi * t);
    for (int m = -(N - 1); m <= N - 1; ++m) {
        const double w = m * h;
        double g = norm * std::exp(-w * w / (4.0 * t));
        k[m + N - 1] = (kind == AxisKernel::gaussian) ? g : -w / (2.0 * t) * g;
    }
    return k;
}

void convolve_axis(const GridSpec& spec, std::span<double> data, int axis,
                   const std::vector<double>& kernel_samples) {
    const int n = spec.dimension;
    const int N = spec.points_per_axis;
    if (static_cast<long>(data.size()) != spec.node_count())
        throw std::invalid_argument("convolve_axis: field size mismatch");
    if (static_cast<int>(kernel_samples.size()) != 2 * N - 1)
        throw std::invalid_argument("convolve_axis: kernel sample count mismatch");
    const int P = padded_size(N);
    const double scale = spec.spacing() / P;  // quadrature weight and FFT normalization

    const auto kspec = kernel_spectrum(kernel_samples, N, P);

    long stride = 1;
    for (int a = n - 1; a > axis; --a) stride *= N;
    const long lines = spec.node_count() / N;
    const long inner = stride;

    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long l = 0; l < lines; ++l) guard.run([&, l] {
        Workspace& ws = workspace_for(P);
        const long base = (l / inner) * inner * N + (l % inner);
        for (int i = 0; i < N; ++i) ws.real[i] = data[base + i * stride];
        for (int i = N; i < P; ++i) ws.real[i] = 0.0;
        fftw_execute(ws.fwd);
        for (int i = 0; i <= P / 2; ++i) {
            const std::complex<double> v{ws.spec[i][0], ws.spec[i][1]};
            const std::complex<double> w = v * kspec[i];
            ws.spec[i][0] = w.real();
            ws.spec[i][1] = w.imag();
        }
        fftw_execute(ws.bwd);
        for (int i = 0; i < N; ++i) data[base + i * stride] = ws.real[i] * scale;
    });
    guard.rethrow_if_failed();
}

std::vector<double> axis_mass_vector(const GridSpec& spec, double t) {
    const int N = spec.points_per_axis;
    const auto k = axis_kernel_samples(spec, t, AxisKernel::gaussian);
    std::vector<double> mu(N);
    const double h = spec.spacing();
    for (int i = 0; i < N; ++i) {
        std::vector<double> terms(N);
        for (int j = 0; j < N; ++j) terms[j] = k[i - j + N - 1];
        mu[i] = h * pairwise_sum(terms);
    }
    return mu;
}

}  // namespace nhs::detail
