#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curveflow/vec2.hpp"

namespace curveflow {

/// Closed polygon standing in for an immersion S^1 -> R^2. Indexing wraps:
/// vertex n follows vertex n-1. Construction checks n >= 3 and finite
/// coordinates; edge degeneracy is checked by the geometric operations.
class PolygonCurve {
public:
    explicit PolygonCurve(std::vector<Vec2> vertices);

    std::size_t size() const noexcept { return vertices_.size(); }
    const Vec2& operator[](std::size_t i) const noexcept { return vertices_[i]; }
    const Vec2& wrapped(std::ptrdiff_t i) const noexcept;
    std::span<const Vec2> vertices() const noexcept { return vertices_; }

    PolygonCurve reversed() const;
    PolygonCurve translated(const Vec2& offset) const;
    PolygonCurve scaled(double factor) const;
    PolygonCurve rotated(double angle) const;
    /// Same closed polygon with vertex `shift` as the new basepoint.
    PolygonCurve cyclically_shifted(std::size_t shift) const;

    bool operator==(const PolygonCurve&) const = default;

private:
    std::vector<Vec2> vertices_;
};

/// Scalar coefficient `a` of a purely normal tangent vector a * n_c.
struct NormalField {
    std::vector<double> values;
};

/// Arbitrary tangent vector h to the space of curves, sampled at the vertices.
struct VectorField {
    std::vector<Vec2> values;
};

/// Everything the discrete metric needs from one curve, computed in one pass.
///   edges[i]    = v[i+1] - v[i]
///   weights[i]  = mean of the two edge lengths adjacent to vertex i
///   tangents[i] = normalized sum of the unit edge directions at vertex i
///   normals[i]  = perp(tangents[i])
///   curvature[i]= turning angle at vertex i / weights[i]
struct CurveGeometry {
    std::vector<Vec2> edges;
    std::vector<double> edge_lengths;
    std::vector<double> weights;
    std::vector<double> turning_angles;
    std::vector<double> curvature;
    std::vector<Vec2> tangents;
    std::vector<Vec2> normals;
    double length = 0.0;
};

/// Throws DegenerateCurve when an edge is shorter than 1e-12 of the length.
CurveGeometry analyze(const PolygonCurve& c);

std::vector<double> edge_lengths(const PolygonCurve& c);
double total_length(const PolygonCurve& c);
std::vector<double> vertex_curvature(const PolygonCurve& c);
std::vector<Vec2> vertex_normals(const PolygonCurve& c);

/// m vertices on the input polygon with all m chords equal; vertex 0 is kept.
/// For polygons whose corners coincide with the new samples this is the
/// equal arc-length resampling.
PolygonCurve resample_constant_speed(const PolygonCurve& c, std::size_t m);

/// Treats the vertices as samples of a smooth closed curve: trigonometric
/// interpolation of x(i), y(i) (exact for sampled circles and ellipses),
/// evaluated at 16 m parameter values, then resample_constant_speed to m.
/// Vertex 0 is kept.
PolygonCurve resample_smooth(const PolygonCurve& c, std::size_t m);

/// Exact directional derivative of vertex_curvature along h.
std::vector<double> curvature_differential(const PolygonCurve& c, const VectorField& h);

/// The continuum identity
///   dk(h) = <h,T> k_s + <h,n> k^2 + (<h,n>)_ss
/// evaluated with discrete arc-length derivatives. Converges to
/// curvature_differential at second order on smooth curves.
std::vector<double> curvature_differential_formula(const PolygonCurve& c, const VectorField& h);

/// Periodic central differences on a uniform grid with spacing `h`.
std::vector<double> periodic_d1(std::span<const double> f, double h);
std::vector<double> periodic_d2(std::span<const double> f, double h);

}  // namespace curveflow
