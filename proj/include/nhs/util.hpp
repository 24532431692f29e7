#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhs {

/// Raised when a computation leaves the numerically meaningful regime
/// (NaN iterates, blow-up, quadrature on degenerate data). The CLI maps
/// this to exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised by the config parser/validator; carries the 1-based line number
/// of the offending entry (0 when the problem is file-wide). The CLI maps
/// this to exit code 2.
struct config_error : std::runtime_error {
    int line;
    config_error(int line_, const std::string& msg)
        : std::runtime_error(msg), line(line_) {}
};

inline double sq(double x) { return x * x; }

/// Captures the first exception thrown inside a parallel loop body so the
/// calling thread can rethrow it after the join. Exceptions must never
/// unwind out of an OpenMP region (that calls std::terminate), so every
/// parallel loop whose body can throw wraps it in run().
class exception_guard {
  public:
    template <typename Fn>
    void run(Fn&& body) noexcept {
        if (failed_.load(std::memory_order_relaxed)) return;
        try {
            body();
        } catch (...) {
            bool expected = false;
            if (failed_.compare_exchange_strong(expected, true))
                eptr_ = std::current_exception();
        }
    }
    void rethrow_if_failed() const {
        if (failed_.load()) std::rethrow_exception(eptr_);
    }

  private:
    std::atomic<bool> failed_{false};
    std::exception_ptr eptr_;
};

/// Deterministic pairwise summation. The recursion order depends only on
/// the array layout, never on thread count, so results are reproducible
/// bit for bit across runs and --threads settings.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Uniform double in [0, 1) from a mt19937_64 stream by explicit bit
/// manipulation. std::uniform_real_distribution leaves the mapping
/// implementation-defined; pinning it here keeps seeded data identical
/// across standard libraries.
inline double seeded_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double seeded_uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * seeded_uniform(rng);
}

/// FNV-1a over raw bytes; used to fingerprint config files in run manifests.
inline std::uint64_t fnv1a(std::span<const char> bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace nhs
