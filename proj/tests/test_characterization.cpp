#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nhs/characterization.hpp"
#include "nhs/corpus.hpp"

using namespace nhs;

namespace {

GridSpec box(int n, double L, int N, int M, double T) {
    GridSpec g;
    g.dimension = n;
    g.half_width = L;
    g.points_per_axis = N;
    g.time_levels = GridSpec::graded_levels(T, M);
    return g;
}

const CorpusEntry& by_id(const std::vector<CorpusEntry>& corpus, const std::string& id) {
    for (const auto& e : corpus)
        if (e.id == id) return e;
    REQUIRE_MESSAGE(false, "corpus entry not found: ", id);
    return corpus.front();
}

}  // namespace

TEST_CASE("restriction/extension chains hold across input types") {
    const GridSpec g = box(1, 1.0, 64, 16, 0.25);
    const BallFamily fam = make_ball_family(g, 1, 4, 2);
    const auto corpus = make_corpus(42, 1.0, 1);

    for (const std::string& id : {"gauss-bump", "clipped-log", "lacunary", "random-fourier",
                                  "odd-pair", "const-plus-bump"}) {
        const ScalarField f = by_id(corpus, id).sample(g);
        const auto rows = extension_equivalence_suite(f, fam);
        REQUIRE(rows.size() == 5);
        CHECK(rows[0].name == "tent-inf2-split");
        CHECK(rows[1].name == "carleson-inv-split");
        CHECK(rows[2].name == "tent-inf1-split");
        CHECK(rows[3].name == "weighted-linf-split");
        CHECK(rows[4].name == "linf-vs-besov");
        for (const ChainCheck& c : rows) {
            INFO("input ", id, ", chain ", c.name);
            CHECK(c.pass);
            CHECK(c.base >= 0.0);
            CHECK(c.split_sum >= 0.0);
        }
        // The provable constants for this grid and a mirror-symmetric family.
        CHECK(rows[0].lower_const == 1.0);
        CHECK(rows[0].upper_const == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
        CHECK(rows[1].upper_const == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
        CHECK(rows[2].upper_const == 4.0);
        CHECK(rows[3].upper_const == 2.0);
        CHECK(rows[4].lower_const == 0.0);
        CHECK(rows[4].upper_const == 1.0);
    }
}

TEST_CASE("interface-even data doubles every split sum exactly") {
    // For grid-even input the two even extensions coincide with the input
    // itself, so each side of the split reproduces the base norm.
    const GridSpec g = box(1, 1.0, 64, 16, 0.25);
    const BallFamily fam = make_ball_family(g, 1, 4, 2);
    const auto corpus = make_corpus(42, 1.0, 1);
    const ScalarField f = by_id(corpus, "even-pair").sample(g);

    // Confirm exact grid evenness first: mirrored nodes carry equal samples.
    for (int i = 0; i < g.points_per_axis; ++i)
        CHECK(f[i] == f[g.mirror(i)]);

    const auto rows = extension_equivalence_suite(f, fam);
    for (int j = 0; j < 4; ++j) {
        INFO("chain ", rows[j].name);
        CHECK(rows[j].split_sum == doctest::Approx(2.0 * rows[j].base).epsilon(1e-12));
        CHECK(rows[j].pass);
    }
    CHECK(rows[4].pass);
}

TEST_CASE("data supported in one half space leans on the lower constant") {
    // The empty half contributes an exactly-zero extension, so the split
    // sum is the surviving side alone. Its sup norm equals the base
    // exactly (reflection adds no new maximum); the tent norms may gain
    // from interface-crossing balls that see the mirrored mass, so for
    // them the lower inequality holds one-sidedly.
    const GridSpec g = box(1, 1.0, 64, 16, 0.25);
    const BallFamily fam = make_ball_family(g, 1, 4, 2);
    const auto corpus = make_corpus(42, 1.0, 1);
    const ScalarField f = by_id(corpus, "half-bump-upper").sample(g);

    for (int i = 0; i < g.points_per_axis / 2; ++i) CHECK(f[i] == 0.0);

    const auto rows = extension_equivalence_suite(f, fam);
    for (int j = 0; j < 4; ++j) {
        INFO("chain ", rows[j].name);
        CHECK(rows[j].split_sum >= rows[j].base - 1e-15);
        CHECK(rows[j].lower_margin >= -1e-15);
        CHECK(rows[j].pass);
    }
    CHECK(rows[3].split_sum == doctest::Approx(rows[3].base).epsilon(1e-12));
    CHECK(std::abs(rows[3].lower_margin) <= 1e-12);
}

TEST_CASE("the two Carleson-split chains are the same comparison twice") {
    // Chain 1 reflects the slices of the zero-flux extension; chain 2
    // flows the reflected trace with the whole-space semigroup. The
    // reflection identity makes these the same numbers up to roundoff.
    const GridSpec g = box(1, 1.0, 64, 16, 0.25);
    const BallFamily fam = make_ball_family(g, 1, 4, 2);
    const auto corpus = make_corpus(42, 1.0, 1);

    for (const std::string& id : {"gauss-bump", "random-fourier", "tanh-ramp"}) {
        const ScalarField f = by_id(corpus, id).sample(g);
        const auto rows = extension_equivalence_suite(f, fam);
        CHECK(rows[0].base == doctest::Approx(rows[1].base).epsilon(1e-15));
        CHECK(rows[0].split_sum == doctest::Approx(rows[1].split_sum).epsilon(1e-12));
    }
}

TEST_CASE("divergence data embeds with the configured slack") {
    const GridSpec g = box(1, 1.0, 64, 16, 0.25);
    const BallFamily fam = make_ball_family(g, 1, 4, 2);
    const auto corpus = make_corpus(42, 1.0, 1);

    for (const std::string& id : {"tanh-normal", "gauss-bump", "lacunary"}) {
        VectorField F(g);
        F.comp[0] = by_id(corpus, id).sample(g);
        const DivergenceEmbedding d = divergence_embedding(F, fam);
        INFO("component ", id);
        CHECK(d.slack == 8.0);  // default slack
        CHECK(d.lhs > 0.0);
        CHECK(d.rhs > 0.0);
        CHECK(d.pass);
        // The comparison is honest: a nonsensically small slack fails.
        CHECK(!divergence_embedding(F, fam, 1e-6).pass);
    }

    const GridSpec g2 = box(2, 1.0, 32, 8, 0.25);
    const BallFamily fam2 = make_ball_family(g2, 1, 3, 2);
    const auto corpus2 = make_corpus(42, 1.0, 2);
    VectorField F2(g2);
    F2.comp[0] = by_id(corpus2, "gauss-bump").sample(g2);
    F2.comp[1] = by_id(corpus2, "tanh-normal").sample(g2);
    CHECK(divergence_embedding(F2, fam2).pass);
}

TEST_CASE("forward trace comparison: scaling exactness and degenerate input") {
    const GridSpec g = box(1, 1.0, 64, 16, 0.25);
    const BallFamily fam = make_ball_family(g, 1, 4, 2);
    const auto corpus = make_corpus(42, 1.0, 1);
    const ScalarField f = by_id(corpus, "clipped-log").sample(g);

    const TraceForward a = trace_forward(f, fam);
    CHECK(a.ratio_defined);
    CHECK(a.tmo > 0.0);
    CHECK(a.bmo > 0.0);
    CHECK(a.ratio == doctest::Approx(a.tmo / a.bmo).epsilon(1e-15));

    // Doubling the data doubles both norms through every linear stage, so
    // the quotient is reproduced exactly.
    const TraceForward b = trace_forward(2.0 * f, fam);
    CHECK(b.ratio == a.ratio);

    // Identically zero data has no defined quotient.
    const TraceForward z = trace_forward(ScalarField(g), fam);
    CHECK(!z.ratio_defined);
    CHECK(z.ratio == 0.0);
    CHECK(z.bmo == 0.0);
}

TEST_CASE("trace round trip drifts like the first time level") {
    // The recovered trace is the extension at t_1 = T/M^2; refining M by
    // two shrinks t_1 by four, and the drift follows at first order —
    // provided t_1 stays at or above the spatial resolution floor h^2,
    // below which the flow degrades toward the identity and the drift
    // collapses faster (hence N = 128 here, where t_1 >= h^2 for both M).
    const auto corpus = make_corpus(42, 1.0, 1);
    const CorpusEntry& e = by_id(corpus, "gauss-bump");

    const GridSpec g16 = box(1, 1.0, 128, 16, 0.25);
    const GridSpec g32 = box(1, 1.0, 128, 32, 0.25);
    const BallFamily fam16 = make_ball_family(g16, 1, 4, 2);
    const BallFamily fam32 = make_ball_family(g32, 1, 4, 2);

    const TraceRoundtrip r16 = trace_roundtrip(e.sample(g16), fam16);
    const TraceRoundtrip r32 = trace_roundtrip(e.sample(g32), fam32);

    CHECK(r32.recovered_trace_error < 0.01);
    CHECK(r32.recovered_trace_error < r16.recovered_trace_error);
    const double ratio = r16.recovered_trace_error / r32.recovered_trace_error;
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);

    CHECK(r32.trace_bmo > 0.0);
    CHECK(r32.tmo > 0.0);
    CHECK(r32.norm_ratio == doctest::Approx(r32.trace_bmo / r32.tmo).epsilon(1e-15));
}
