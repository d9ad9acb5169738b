#pragma once

#include <cstddef>

#include "curveflow/curve.hpp"

namespace curveflow {

/// Regular n-gon inscribed in the circle of radius r, counterclockwise,
/// vertex 0 at angle `phase`.
PolygonCurve make_circle(std::size_t n, double radius, Vec2 center = {}, double phase = 0.0);

/// Ellipse with semi-axes a (along the rotated x axis) and b, sampled
/// uniformly in the angular parameter. Counterclockwise.
PolygonCurve make_ellipse(std::size_t n, double a, double b, double rotation = 0.0, Vec2 center = {});

/// Stadium: two half circles of `radius` joined by straight segments of
/// `segment_length` parallel to the x axis, sampled at equal arc length with
/// vertex 0 at the middle of the bottom segment. Counterclockwise.
PolygonCurve make_stadium(std::size_t n, double radius, double segment_length, Vec2 center = {});

}  // namespace curveflow
