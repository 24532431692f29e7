#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nhs/util.hpp"

namespace nhs {

/// The distinguished axis is the last coordinate x_n; the two open half
/// spaces are { x_n > 0 } and { x_n < 0 }.
enum class HalfSpace { upper, lower };

inline HalfSpace opposite(HalfSpace h) {
    return h == HalfSpace::upper ? HalfSpace::lower : HalfSpace::upper;
}

/// Cell-centered tensor grid on the box [-L, L]^n together with the time
/// levels at which space-time fields are sampled.
///
/// Nodes sit at -L + (i + 1/2) h with h = 2L / N, so no node lies on the
/// interface x_n = 0 and the node set is symmetric under x_n -> -x_n
/// (index i mirrors to N-1-i). N must be even; indices with i_n >= N/2
/// belong to the upper half space. Storage is row-major with the last
/// axis fastest.
struct GridSpec {
    int dimension = 1;
    double half_width = 1.0;
    int points_per_axis = 64;
    std::vector<double> time_levels;  // strictly increasing, all > 0

    double spacing() const { return 2.0 * half_width / points_per_axis; }
    long node_count() const {
        long c = 1;
        for (int a = 0; a < dimension; ++a) c *= points_per_axis;
        return c;
    }
    double cell_measure() const {
        double m = 1.0;
        for (int a = 0; a < dimension; ++a) m *= spacing();
        return m;
    }
    double coord(int i) const { return -half_width + (i + 0.5) * spacing(); }
    int mirror(int i) const { return points_per_axis - 1 - i; }

    /// Multi-index of a flat node index, row-major, last axis fastest.
    void decode(long flat, std::span<int> idx) const {
        for (int a = dimension - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(flat % points_per_axis);
            flat /= points_per_axis;
        }
    }
    long encode(std::span<const int> idx) const {
        long flat = 0;
        for (int a = 0; a < dimension; ++a) flat = flat * points_per_axis + idx[a];
        return flat;
    }
    void node(long flat, std::span<double> x) const {
        for (int a = dimension - 1; a >= 0; --a) {
            x[a] = coord(static_cast<int>(flat % points_per_axis));
            flat /= points_per_axis;
        }
    }
    /// Index along the normal axis (the fastest-varying one).
    int normal_index(long flat) const { return static_cast<int>(flat % points_per_axis); }
    HalfSpace half_of(long flat) const {
        return normal_index(flat) >= points_per_axis / 2 ? HalfSpace::upper : HalfSpace::lower;
    }

    /// Graded time levels t_k = T (k/M)^2, k = 1..M. Uniform in sqrt(t),
    /// which clusters samples where caloric fields vary fastest.
    static std::vector<double> graded_levels(double horizon, int count);

    void validate() const;
    bool same_box(const GridSpec& o) const {
        return dimension == o.dimension && half_width == o.half_width &&
               points_per_axis == o.points_per_axis;
    }
    bool operator==(const GridSpec& o) const {
        return same_box(o) && time_levels == o.time_levels;
    }
};

/// Scalar samples over every node of a grid.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(GridSpec spec)
        : spec_(std::move(spec)), v_(spec_.node_count(), 0.0) {}
    ScalarField(GridSpec spec, const std::function<double(std::span<const double>)>& fn);

    const GridSpec& spec() const { return spec_; }
    std::span<double> data() { return v_; }
    std::span<const double> data() const { return v_; }
    double& operator[](long i) { return v_[i]; }
    double operator[](long i) const { return v_[i]; }
    long size() const { return static_cast<long>(v_.size()); }

    void fill(double c) { std::fill(v_.begin(), v_.end(), c); }
    void scale(double c) {
        for (double& x : v_) x *= c;
    }
    /// this += c * g
    void add_scaled(const ScalarField& g, double c) {
        for (long i = 0; i < size(); ++i) v_[i] += c * g.v_[i];
    }
    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }
    bool finite() const { return all_finite(v_); }

  private:
    GridSpec spec_;
    std::vector<double> v_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);

/// One scalar component per axis.
struct VectorField {
    std::vector<ScalarField> comp;

    VectorField() = default;
    explicit VectorField(const GridSpec& spec)
        : comp(spec.dimension, ScalarField(spec)) {}
    const GridSpec& spec() const { return comp.at(0).spec(); }
    int dimension() const { return static_cast<int>(comp.size()); }
    bool finite() const {
        for (const auto& c : comp)
            if (!c.finite()) return false;
        return true;
    }
};

/// Scalar field sampled at every time level of its grid.
struct SpaceTimeField {
    GridSpec spec;
    std::vector<ScalarField> slice;  // slice[k] lives at spec.time_levels[k]

    SpaceTimeField() = default;
    explicit SpaceTimeField(const GridSpec& s)
        : spec(s), slice(s.time_levels.size(), ScalarField(s)) {}
    int levels() const { return static_cast<int>(slice.size()); }
    bool finite() const {
        for (const auto& s : slice)
            if (!s.finite()) return false;
        return true;
    }
};

SpaceTimeField operator-(const SpaceTimeField& a, const SpaceTimeField& b);

/// Vector field sampled at every time level (forcing data for the
/// Duhamel integrals).
struct TimeIndexedVectorField {
    GridSpec spec;
    std::vector<VectorField> slice;

    TimeIndexedVectorField() = default;
    explicit TimeIndexedVectorField(const GridSpec& s)
        : spec(s), slice(s.time_levels.size(), VectorField(s)) {}
    int levels() const { return static_cast<int>(slice.size()); }
    bool finite() const {
        for (const auto& s : slice)
            if (!s.finite()) return false;
        return true;
    }
};

/// Quadrature region: the whole box, one half space, or a Euclidean ball.
struct Region {
    enum class Kind { all, upper_half, lower_half, ball };
    Kind kind = Kind::all;
    std::vector<double> center;
    double radius = 0.0;

    static Region all() { return {}; }
    static Region half(HalfSpace h) {
        Region r;
        r.kind = h == HalfSpace::upper ? Kind::upper_half : Kind::lower_half;
        return r;
    }
    static Region ball(std::vector<double> c, double rad) {
        Region r;
        r.kind = Kind::ball;
        r.center = std::move(c);
        r.radius = rad;
        return r;
    }
};

/// Midpoint-rule integral of f over the region. Throws numeric_error
/// ("empty quadrature region") when no node falls inside.
double integrate(const ScalarField& f, const Region& region);

/// Flat indices of the nodes inside a ball, ascending. Cheap bounding-box
/// scan; shared by the quadrature and the norm functionals.
std::vector<long> ball_nodes(const GridSpec& spec, std::span<const double> center, double radius);

/// Zero outside the chosen half space, unchanged inside.
ScalarField restrict_half(const ScalarField& f, HalfSpace h);

/// Even reflection across x_n = 0 of the samples living on half space
/// `from`; samples on the other half of the input are ignored.
ScalarField even_extension(const ScalarField& f, HalfSpace from);

/// Odd reflection across x_n = 0 of the samples on half space `from`.
ScalarField odd_extension(const ScalarField& f, HalfSpace from);

/// Second-order finite differences, computed separately on each half
/// space along the normal axis: stencils never straddle x_n = 0. Central
/// in segment interiors, one-sided (3-point where the segment allows,
/// 2-point otherwise) at segment ends and box edges. Requires
/// points_per_axis >= 4 ("grid too coarse for stencils").
ScalarField derivative_axis(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& F);

/// 3-point second-difference Laplacian per axis with reflecting (zero
/// normal flux) ghosts at the interface and at the outer box edges.
ScalarField laplacian_neumann(const ScalarField& f);

/// Same stencil without the interface split: ghosts only at the outer box
/// edges. Companion of the whole-space heat flow.
ScalarField laplacian_whole(const ScalarField& f);

/// Pointwise Euclidean length |F(x)| of a vector field.
ScalarField euclidean_magnitude(const VectorField& F);

/// Short human-readable grid summary, e.g. "n=1 L=1 N=128 M=32 T=0.25";
/// embedded in norm reports and run manifests.
std::string describe(const GridSpec& spec);

}  // namespace nhs
