#pragma once

#include <string>
#include <vector>

#include "nhs/norms.hpp"

namespace nhs {

/// Forward half of the trace correspondence: the Carleson energy of the
/// caloric extension of f against the oscillation norm of f itself. The
/// two are expected to stay within a fixed mutual band over rough and
/// smooth inputs alike; the band itself is empirical.
struct TraceForward {
    double tmo = 0.0;
    double bmo = 0.0;
    double ratio = 0.0;        // tmo / bmo when defined
    bool ratio_defined = false;  // false when bmo = 0 (constants)
};
TraceForward trace_forward(const ScalarField& f, const BallFamily& fam);

/// Desk-scale surrogate of the inverse trace: extend f, read the first
/// time slice back as g, and measure (a) how far g drifted from f and
/// (b) how the oscillation norm of g compares with the Carleson energy of
/// the extension. A constructive inverse is out of scope; this round trip
/// is the implemented semantics.
struct TraceRoundtrip {
    double recovered_trace_error = 0.0;  // max_x |u(x, t_1) - f(x)|
    double trace_bmo = 0.0;              // oscillation norm of the recovered slice
    double tmo = 0.0;                    // Carleson energy of the extension
    double norm_ratio = 0.0;             // trace_bmo / tmo (0 when tmo = 0)
};
TraceRoundtrip trace_roundtrip(const ScalarField& f, const BallFamily& fam);

/// Divergence embedding: the Carleson norm of div F against the sum of
/// the oscillation norms of the components, with a multiplicative slack
/// standing in for the unspecified continuum constant.
struct DivergenceEmbedding {
    double lhs = 0.0;  // carleson norm of the extension of div F
    double rhs = 0.0;  // sum_j oscillation norm of F_j
    double slack = 0.0;
    bool pass = false;  // lhs <= slack * rhs
};
DivergenceEmbedding divergence_embedding(const VectorField& F, const BallFamily& fam,
                                         double slack = 8.0);

/// One two-sided comparison lower_const * base <= split_sum <=
/// upper_const * base between a norm of f (or of its caloric extension)
/// and a companion quantity, usually the same norm summed over the even
/// extensions of its half-space restrictions. The constants are the ones
/// provable for this discrete grid with a mirror-symmetric ball family;
/// margins are normalized by max(base, split_sum) so "pass" means both
/// inequalities hold up to `tolerance` (relative).
struct ChainCheck {
    std::string name;
    double base = 0.0;
    double split_sum = 0.0;
    double lower_const = 0.0;
    double upper_const = 0.0;
    double lower_margin = 0.0;  // (split_sum - lower_const*base) / scale
    double upper_margin = 0.0;  // (upper_const*base - split_sum) / scale
    bool pass = false;
};

/// The five restriction/extension comparisons, evaluated on f and on the
/// caloric extension of f. For the first four, "base" is the
/// interface-adapted norm and "split_sum" the same norm totalled over the
/// two even extensions:
///   tent-inf2-split    : 1 <= split/base <= 2 sqrt(2)
///   carleson-inv-split : 1 <= split/base <= 2 sqrt(2)
///   tent-inf1-split    : 1 <= split/base <= 4
///   weighted-linf-split: 1 <= split/base <= 2
/// The fifth is one-sided with the roles turned around: base is the sum
/// of the even-trace heat-Besov norms and split_sum the weighted sup of
/// the extension,
///   linf-vs-besov      : 0 <= split/base <= 1.
/// Requires a mirror-symmetric family (make_ball_family guarantees that).
std::vector<ChainCheck> extension_equivalence_suite(const ScalarField& f, const BallFamily& fam,
                                                    double tolerance = 1e-9);

}  // namespace nhs
