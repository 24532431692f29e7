#include "nhs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nhs {

std::vector<double> GridSpec::graded_levels(double horizon, int count) {
    if (horizon <= 0.0 || count < 1)
        throw std::invalid_argument("graded_levels: need horizon > 0 and count >= 1");
    std::vector<double> t(count);
    for (int k = 1; k <= count; ++k)
        t[k - 1] = horizon * sq(static_cast<double>(k) / count);
    return t;
}

void GridSpec::validate() const {
    if (dimension < 1) throw std::invalid_argument("grid dimension must be >= 1");
    if (half_width <= 0.0) throw std::invalid_argument("grid half_width must be > 0");
    if (points_per_axis < 2 || points_per_axis % 2 != 0)
        throw std::invalid_argument("points_per_axis must be even and >= 2");
    double prev = 0.0;
    for (double t : time_levels) {
        if (!(t > prev)) throw std::invalid_argument("time levels must be strictly increasing and > 0");
        prev = t;
    }
}

ScalarField::ScalarField(GridSpec spec, const std::function<double(std::span<const double>)>& fn)
    : spec_(std::move(spec)), v_(spec_.node_count()) {
    std::vector<double> x(spec_.dimension);
    for (long i = 0; i < size(); ++i) {
        spec_.node(i, x);
        v_[i] = fn(x);
    }
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    ScalarField r = a;
    r.add_scaled(b, 1.0);
    return r;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    ScalarField r = a;
    r.add_scaled(b, -1.0);
    return r;
}

ScalarField operator*(double c, const ScalarField& a) {
    ScalarField r = a;
    r.scale(c);
    return r;
}

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b) {
    SpaceTimeField r = a;
    for (int k = 0; k < r.levels(); ++k) r.slice[k].add_scaled(b.slice[k], -1.0);
    return r;
}

std::vector<long> ball_nodes(const GridSpec& spec, std::span<const double> center, double radius) {
    const int n = spec.dimension;
    const int N = spec.points_per_axis;
    const double h = spec.spacing();
    std::vector<int> lo(n), hi(n);
    for (int a = 0; a < n; ++a) {
        // node i has coordinate -L + (i + 0.5) h
        lo[a] = std::max(0, static_cast<int>(std::ceil((center[a] - radius + spec.half_width) / h - 0.5)));
        hi[a] = std::min(N - 1, static_cast<int>(std::floor((center[a] + radius + spec.half_width) / h - 0.5)));
        if (lo[a] > hi[a]) return {};
    }
    std::vector<long> out;
    std::vector<int> idx(lo);
    const double r2 = radius * radius;
    while (true) {
        double d2 = 0.0;
        for (int a = 0; a < n; ++a) d2 += sq(spec.coord(idx[a]) - center[a]);
        if (d2 < r2) out.push_back(spec.encode(idx));
        int a = n - 1;
        while (a >= 0 && ++idx[a] > hi[a]) idx[a] = lo[a], --a;
        if (a < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

double integrate(const ScalarField& f, const Region& region) {
    const GridSpec& g = f.spec();
    std::vector<double> vals;
    switch (region.kind) {
        case Region::Kind::all:
            vals.assign(f.data().begin(), f.data().end());
            break;
        case Region::Kind::upper_half:
        case Region::Kind::lower_half: {
            HalfSpace want = region.kind == Region::Kind::upper_half ? HalfSpace::upper : HalfSpace::lower;
            vals.reserve(f.size() / 2);
            for (long i = 0; i < f.size(); ++i)
                if (g.half_of(i) == want) vals.push_back(f[i]);
            break;
        }
        case Region::Kind::ball: {
            if (static_cast<int>(region.center.size()) != g.dimension)
                throw std::invalid_argument("ball center dimension mismatch");
            for (long i : ball_nodes(g, region.center, region.radius)) vals.push_back(f[i]);
            break;
        }
    }
    if (vals.empty()) throw numeric_error("empty quadrature region");
    return g.cell_measure() * pairwise_sum(vals);
}

namespace {

ScalarField reflect_from(const ScalarField& f, HalfSpace from, double sign) {
    const GridSpec& g = f.spec();
    const int N = g.points_per_axis;
    ScalarField out(g);
    for (long i = 0; i < f.size(); ++i) {
        int in = g.normal_index(i);
        bool in_from = (from == HalfSpace::upper) ? (in >= N / 2) : (in < N / 2);
        if (in_from) {
            out[i] = f[i];
        } else {
            long src = i + static_cast<long>(g.mirror(in)) - in;  // flip only the last axis
            out[i] = sign * f[src];
        }
    }
    return out;
}

}  // namespace

ScalarField restrict_half(const ScalarField& f, HalfSpace h) {
    const GridSpec& g = f.spec();
    ScalarField out(g);
    for (long i = 0; i < f.size(); ++i)
        if (g.half_of(i) == h) out[i] = f[i];
    return out;
}

ScalarField even_extension(const ScalarField& f, HalfSpace from) {
    return reflect_from(f, from, 1.0);
}

ScalarField odd_extension(const ScalarField& f, HalfSpace from) {
    return reflect_from(f, from, -1.0);
}

namespace {

// One-dimensional derivative of a contiguous segment [s, e) of a line,
// written into out. Central differences inside, one-sided at the ends.
void segment_derivative(std::span<const double> v, std::span<double> out, long s, long e, long stride,
                        double h) {
    const long len = e - s;
    auto at = [&](long i) { return v[i * stride]; };
    for (long i = s; i < e; ++i) {
        double d;
        if (i > s && i < e - 1) {
            d = (at(i + 1) - at(i - 1)) / (2.0 * h);
        } else if (i == s) {
            d = (len >= 3) ? (-3.0 * at(s) + 4.0 * at(s + 1) - at(s + 2)) / (2.0 * h)
                           : (at(s + 1) - at(s)) / h;
        } else {  // i == e - 1
            d = (len >= 3) ? (3.0 * at(e - 1) - 4.0 * at(e - 2) + at(e - 3)) / (2.0 * h)
                           : (at(e - 1) - at(e - 2)) / h;
        }
        out[i * stride] = d;
    }
}

// Second difference with reflecting ghosts: the mirror image of an end
// cell is the cell itself, so the ghost value equals the end value.
void segment_second_difference(std::span<const double> v, std::span<double> out, long s, long e,
                               long stride, double h) {
    auto at = [&](long i) { return v[i * stride]; };
    for (long i = s; i < e; ++i) {
        double left = (i > s) ? at(i - 1) : at(i);
        double right = (i < e - 1) ? at(i + 1) : at(i);
        out[i * stride] += (left - 2.0 * at(i) + right) / (h * h);
    }
}

template <typename SegmentOp>
void for_each_line(const GridSpec& g, int axis, const SegmentOp& op) {
    const int n = g.dimension;
    const int N = g.points_per_axis;
    long stride = 1;
    for (int a = n - 1; a > axis; --a) stride *= N;
    const long lines = g.node_count() / N;
    // Lines along `axis`: iterate every flat index whose axis-component is 0.
    const long inner = stride;              // count of faster-axis states
    const long outer = lines / inner;       // count of slower-axis states
    exception_guard guard;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long l = 0; l < lines; ++l) guard.run([&, l] {
        long o = l / inner, i = l % inner;
        long base = o * inner * N + i;
        op(base, stride);
    });
    guard.rethrow_if_failed();
    (void)outer;
}

}  // namespace

ScalarField derivative_axis(const ScalarField& f, int axis) {
    const GridSpec& g = f.spec();
    const int N = g.points_per_axis;
    if (N < 4) throw numeric_error("grid too coarse for stencils");
    if (axis < 0 || axis >= g.dimension) throw std::invalid_argument("derivative axis out of range");
    ScalarField out(g);
    const double h = g.spacing();
    const bool split = (axis == g.dimension - 1);  // normal axis: stay within each half space
    for_each_line(g, axis, [&](long base, long stride) {
        std::span<const double> vin(f.data().data() + base, static_cast<size_t>((N - 1) * stride + 1));
        std::span<double> vout(out.data().data() + base, static_cast<size_t>((N - 1) * stride + 1));
        if (split) {
            segment_derivative(vin, vout, 0, N / 2, stride, h);
            segment_derivative(vin, vout, N / 2, N, stride, h);
        } else {
            segment_derivative(vin, vout, 0, N, stride, h);
        }
    });
    return out;
}

VectorField gradient(const ScalarField& f) {
    VectorField F(f.spec());
    for (int a = 0; a < f.spec().dimension; ++a) F.comp[a] = derivative_axis(f, a);
    return F;
}

ScalarField divergence(const VectorField& F) {
    if (F.dimension() != F.spec().dimension)
        throw std::invalid_argument("vector field component count mismatch");
    ScalarField out = derivative_axis(F.comp[0], 0);
    for (int a = 1; a < F.dimension(); ++a) out.add_scaled(derivative_axis(F.comp[a], a), 1.0);
    return out;
}

namespace {

ScalarField laplacian_impl(const ScalarField& f, bool split_normal) {
    const GridSpec& g = f.spec();
    const int N = g.points_per_axis;
    if (N < 4) throw numeric_error("grid too coarse for stencils");
    ScalarField out(g);
    const double h = g.spacing();
    for (int axis = 0; axis < g.dimension; ++axis) {
        const bool split = split_normal && (axis == g.dimension - 1);
        for_each_line(g, axis, [&](long base, long stride) {
            std::span<const double> vin(f.data().data() + base, static_cast<size_t>((N - 1) * stride + 1));
            std::span<double> vout(out.data().data() + base, static_cast<size_t>((N - 1) * stride + 1));
            if (split) {
                segment_second_difference(vin, vout, 0, N / 2, stride, h);
                segment_second_difference(vin, vout, N / 2, N, stride, h);
            } else {
                segment_second_difference(vin, vout, 0, N, stride, h);
            }
        });
    }
    return out;
}

}  // namespace

ScalarField laplacian_neumann(const ScalarField& f) { return laplacian_impl(f, true); }

ScalarField laplacian_whole(const ScalarField& f) { return laplacian_impl(f, false); }

ScalarField euclidean_magnitude(const VectorField& F) {
    ScalarField out(F.spec());
    for (long i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (int a = 0; a < F.dimension(); ++a) s += sq(F.comp[a][i]);
        out[i] = std::sqrt(s);
    }
    return out;
}

std::string describe(const GridSpec& spec) {
    std::ostringstream os;
    os << "n=" << spec.dimension << " L=" << spec.half_width << " N=" << spec.points_per_axis;
    if (!spec.time_levels.empty())
        os << " M=" << spec.time_levels.size() << " T=" << spec.time_levels.back();
    return os.str();
}

}  // namespace nhs
