#include "nhs/corpus.hpp"

#include <cmath>
#include <sstream>

#include "nhs/io.hpp"

namespace nhs {

namespace {

// C-infinity bump supported on (-1, 1), equal to 1 at 0.
double bump01(double s) {
    return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
}

double len(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Length of the tangential part (all but the last coordinate).
double len_tang(std::span<const double> x) {
    double s = 0.0;
    for (size_t a = 0; a + 1 < x.size(); ++a) s += x[a] * x[a];
    return std::sqrt(s);
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

ScalarField CorpusEntry::sample_scaled(const GridSpec& spec, double lambda) const {
    const auto& f = fn;
    return ScalarField(spec, [lambda, &f](std::span<const double> x) {
        std::vector<double> y(x.size());
        for (size_t a = 0; a < x.size(); ++a) y[a] = lambda * x[a];
        return lambda * f(y);
    });
}

std::vector<CorpusEntry> make_corpus(std::uint64_t seed, double L, int n) {
    if (n < 1) throw std::invalid_argument("corpus dimension must be >= 1");
    if (L <= 0.0) throw std::invalid_argument("corpus box half-width must be > 0");
    const double pi = 4.0 * std::atan(1.0);
    std::vector<CorpusEntry> c;
    c.reserve(20);

    auto add = [&](std::string id, std::string kind, std::string def,
                   std::function<double(std::span<const double>)> fn) {
        c.push_back({std::move(id), std::move(kind), std::move(def), std::move(fn)});
    };

    // Entries draw from one stream, in the order they are defined below;
    // the pinned uniform mapping keeps every draw platform-independent.
    std::mt19937_64 rng(seed);

    {
        const double w = 0.35 * L;
        add("gauss-bump", "bump", "exp(-|x|^2/" + fmt(w) + "^2)",
            [w](std::span<const double> x) { return std::exp(-sq(len(x) / w)); });
    }
    {
        const double w = 0.25 * L, ctr = 0.3 * L;
        add("offset-bump", "bump",
            "exp(-(|x - " + fmt(ctr) + " e_n|^2)/" + fmt(w) + "^2)",
            [w, ctr](std::span<const double> x) {
                double s = sq(x.back() - ctr);
                for (size_t a = 0; a + 1 < x.size(); ++a) s += sq(x[a]);
                return std::exp(-s / sq(w));
            });
    }
    {
        const double w = 0.18 * L, ctr = 0.4 * L, wt = 0.3 * L;
        auto pair = [w, ctr, wt](std::span<const double> x, double sign) {
            const double tang = std::exp(-sq(len_tang(x) / wt));
            return tang * (std::exp(-sq((x.back() - ctr) / w)) +
                           sign * std::exp(-sq((x.back() + ctr) / w)));
        };
        add("even-pair", "symmetric",
            "exp(-|x'|^2/" + fmt(wt) + "^2) (G(x_n-" + fmt(ctr) + ") + G(x_n+" + fmt(ctr) +
                ")), G width " + fmt(w),
            [pair](std::span<const double> x) { return pair(x, 1.0); });
        add("odd-pair", "antisymmetric",
            "exp(-|x'|^2/" + fmt(wt) + "^2) (G(x_n-" + fmt(ctr) + ") - G(x_n+" + fmt(ctr) +
                ")), G width " + fmt(w),
            [pair](std::span<const double> x) { return pair(x, -1.0); });
    }
    add("clipped-log", "log", "min(3, -log(|x|/" + fmt(L) + " + 1e-3))",
        [L](std::span<const double> x) {
            return std::min(3.0, -std::log(len(x) / L + 1e-3));
        });
    {
        const double s = 0.2 * L;
        add("clipped-log-shift", "log",
            "min(3, max(-3, -log(|x - " + fmt(s) + "(1,..,1)|/" + fmt(L) + " + 1e-3)))",
            [L, s](std::span<const double> x) {
                double d = 0.0;
                for (double v : x) d += sq(v - s);
                return std::min(3.0, std::max(-3.0, -std::log(std::sqrt(d) / L + 1e-3)));
            });
    }
    {
        const double w = 0.2 * L;
        add("tanh-ramp", "ramp", "tanh(x_1/" + fmt(w) + ")",
            [w](std::span<const double> x) { return std::tanh(x[0] / w); });
    }
    {
        const double w = 0.3 * L;
        add("sign-ramp", "ramp", "sign(x_n) min(1, |x_n|/" + fmt(w) + ")",
            [w](std::span<const double> x) {
                const double v = x.back();
                return (v > 0 ? 1.0 : -1.0) * std::min(1.0, std::abs(v) / w);
            });
    }
    add("lacunary", "lacunary", "0.3 sum_{j=1..6} cos(2^j pi x_1/" + fmt(L) + ")/sqrt(j)",
        [L, pi](std::span<const double> x) {
            double s = 0.0;
            for (int j = 1; j <= 6; ++j)
                s += std::cos(std::ldexp(1.0, j) * pi * x[0] / L) / std::sqrt(double(j));
            return 0.3 * s;
        });
    {
        std::vector<double> ak, bk;
        std::ostringstream def;
        def << "sum_a sum_{k=1..4} (a cos(k pi x_a/L) + b sin)/k; a,b=";
        for (int a = 0; a < n; ++a)
            for (int k = 1; k <= 4; ++k) {
                ak.push_back(seeded_uniform(rng, -0.5, 0.5));
                bk.push_back(seeded_uniform(rng, -0.5, 0.5));
                def << fmt(ak.back()) << "," << fmt(bk.back()) << ";";
            }
        add("random-fourier", "random", def.str(),
            [ak, bk, L, pi](std::span<const double> x) {
                double s = 0.0;
                for (size_t a = 0; a < x.size(); ++a)
                    for (int k = 1; k <= 4; ++k) {
                        const size_t i = a * 4 + (k - 1);
                        s += (ak[i] * std::cos(k * pi * x[a] / L) +
                              bk[i] * std::sin(k * pi * x[a] / L)) /
                             k;
                    }
                return s;
            });
    }
    {
        const double w = 0.3 * L, ctr = 0.4 * L, wt = 0.6 * L;
        auto half_bump = [w, ctr, wt](std::span<const double> x, double side) {
            double v = bump01((x.back() - side * ctr) / w);
            for (size_t a = 0; a + 1 < x.size(); ++a) v *= bump01(x[a] / wt);
            return v;
        };
        add("half-bump-upper", "halfspace",
            "B((x_n-" + fmt(ctr) + ")/" + fmt(w) + ") prod B(x_a/" + fmt(wt) + ")",
            [half_bump](std::span<const double> x) { return half_bump(x, 1.0); });
        add("half-bump-lower", "halfspace",
            "B((x_n+" + fmt(ctr) + ")/" + fmt(w) + ") prod B(x_a/" + fmt(wt) + ")",
            [half_bump](std::span<const double> x) { return half_bump(x, -1.0); });
    }
    {
        struct HalfBump {
            double amp, w, cn;
            std::vector<double> ct;
        };
        std::vector<HalfBump> terms;
        std::ostringstream def;
        def << "sum_{m=1..4} A B((x_n-c_n)/w) prod B((x_a-c_a)/w); A,w,c=";
        for (int m = 0; m < 4; ++m) {
            HalfBump t;
            t.w = seeded_uniform(rng, 0.08 * L, 0.2 * L);
            const double side = seeded_uniform(rng) < 0.5 ? -1.0 : 1.0;
            t.cn = side * std::min(t.w + seeded_uniform(rng, 0.02 * L, 0.5 * L), L - t.w);
            t.ct.resize(n - 1);
            for (int a = 0; a < n - 1; ++a) t.ct[a] = seeded_uniform(rng, -0.5 * L, 0.5 * L);
            t.amp = seeded_uniform(rng, -1.0, 1.0);
            def << fmt(t.amp) << "," << fmt(t.w) << "," << fmt(t.cn);
            for (double v : t.ct) def << "," << fmt(v);
            def << ";";
            terms.push_back(std::move(t));
        }
        add("random-half-bumps", "random", def.str(), [terms](std::span<const double> x) {
            double s = 0.0;
            for (const auto& t : terms) {
                double v = t.amp * bump01((x.back() - t.cn) / t.w);
                for (size_t a = 0; a + 1 < x.size(); ++a) v *= bump01((x[a] - t.ct[a]) / t.w);
                s += v;
            }
            return s;
        });
    }
    {
        const double r0 = 0.4 * L, r1 = 0.75 * L;
        add("plateau", "plateau",
            "1 on |x|<" + fmt(r0) + ", cosine taper to 0 at " + fmt(r1),
            [r0, r1, pi](std::span<const double> x) {
                const double r = len(x);
                if (r <= r0) return 1.0;
                if (r >= r1) return 0.0;
                return 0.5 * (1.0 + std::cos(pi * (r - r0) / (r1 - r0)));
            });
    }
    add("cos-product", "oscillator", "cos(3 pi x_1/" + fmt(L) + ") cos(pi x_n/" + fmt(L) + ")",
        [L, pi](std::span<const double> x) {
            return std::cos(3.0 * pi * x[0] / L) * std::cos(pi * x.back() / L);
        });
    {
        const double w = 0.3 * L;
        add("gauss-deriv", "meanzero", "(x_1/" + fmt(L) + ") exp(-|x|^2/" + fmt(w) + "^2)",
            [w, L](std::span<const double> x) {
                return (x[0] / L) * std::exp(-sq(len(x) / w));
            });
    }
    {
        const double w = 0.12 * L, c1 = 0.3 * L, c2 = 0.62 * L, wt = 0.5 * L;
        add("atom-upper", "atom",
            "B((x_n-" + fmt(c1) + ")/" + fmt(w) + ") - B((x_n-" + fmt(c2) + ")/" + fmt(w) +
                "), tangential B(x_a/" + fmt(wt) + ")",
            [w, c1, c2, wt](std::span<const double> x) {
                double tang = 1.0;
                for (size_t a = 0; a + 1 < x.size(); ++a) tang *= bump01(x[a] / wt);
                return tang * (bump01((x.back() - c1) / w) - bump01((x.back() - c2) / w));
            });
    }
    {
        const double w = 0.15 * L;
        add("tanh-normal", "ramp", "tanh(x_n/" + fmt(w) + ")",
            [w](std::span<const double> x) { return std::tanh(x.back() / w); });
    }
    {
        struct Gauss {
            double amp, w;
            std::vector<double> ctr;
        };
        std::vector<Gauss> terms;
        std::ostringstream def;
        def << "sum_{m=1..8} A exp(-|x-c|^2/w^2); A,w,c=";
        for (int m = 0; m < 8; ++m) {
            Gauss t;
            t.ctr.resize(n);
            for (int a = 0; a < n; ++a) t.ctr[a] = seeded_uniform(rng, -0.6 * L, 0.6 * L);
            t.w = seeded_uniform(rng, 0.15 * L, 0.35 * L);
            t.amp = seeded_uniform(rng, -1.0, 1.0);
            def << fmt(t.amp) << "," << fmt(t.w);
            for (double v : t.ctr) def << "," << fmt(v);
            def << ";";
            terms.push_back(std::move(t));
        }
        add("random-field", "random", def.str(), [terms](std::span<const double> x) {
            double s = 0.0;
            for (const auto& t : terms) {
                double d = 0.0;
                for (size_t a = 0; a < x.size(); ++a) d += sq(x[a] - t.ctr[a]);
                s += t.amp * std::exp(-d / sq(t.w));
            }
            return s;
        });
    }
    {
        const double w = 0.3 * L;
        add("const-plus-bump", "affine", "0.5 + 0.3 exp(-|x|^2/" + fmt(w) + "^2)",
            [w](std::span<const double> x) { return 0.5 + 0.3 * std::exp(-sq(len(x) / w)); });
    }
    return c;
}

std::string corpus_manifest(std::uint64_t seed, double half_width, int dimension) {
    std::ostringstream os;
    os << "id,kind,definition\n";
    for (const auto& e : make_corpus(seed, half_width, dimension))
        os << e.id << "," << e.kind << ",\"" << e.definition << "\"\n";
    return os.str();
}

}  // namespace nhs
