#include "curveflow/shapes.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "curveflow/errors.hpp"

namespace curveflow {

PolygonCurve make_circle(std::size_t n, double radius, Vec2 center, double phase) {
    if (!(radius > 0.0)) throw CurveError(ErrorCode::InvalidInput, "circle radius must be positive");
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts[i] = center + Vec2{radius * std::cos(a), radius * std::sin(a)};
    }
    return PolygonCurve(std::move(pts));
}

PolygonCurve make_ellipse(std::size_t n, double a, double b, double rotation, Vec2 center) {
    if (!(a > 0.0) || !(b > 0.0)) throw CurveError(ErrorCode::InvalidInput, "ellipse axes must be positive");
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts[i] = center + rotate(Vec2{a * std::cos(t), b * std::sin(t)}, rotation);
    }
    return PolygonCurve(std::move(pts));
}

PolygonCurve make_stadium(std::size_t n, double radius, double segment_length, Vec2 center) {
    if (!(radius > 0.0) || segment_length < 0.0) {
        throw CurveError(ErrorCode::InvalidInput, "stadium needs radius > 0 and segment length >= 0");
    }
    const double pi = std::numbers::pi;
    const double half = 0.5 * segment_length;
    const double arc = pi * radius;
    const double total = 2.0 * segment_length + 2.0 * arc;
    // Arc-length parametrization starting at the middle of the bottom segment.
    auto point_at = [&](double s) -> Vec2 {
        s = std::fmod(s, total);
        if (s < half) return {s, -radius};
        s -= half;
        if (s < arc) {
            const double phi = -0.5 * pi + s / radius;
            return {half + radius * std::cos(phi), radius * std::sin(phi)};
        }
        s -= arc;
        if (s < segment_length) return {half - s, radius};
        s -= segment_length;
        if (s < arc) {
            const double phi = 0.5 * pi + s / radius;
            return {-half + radius * std::cos(phi), radius * std::sin(phi)};
        }
        s -= arc;
        return {-half + s, -radius};
    };
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = center + point_at(total * static_cast<double>(i) / static_cast<double>(n));
    }
    return PolygonCurve(std::move(pts));
}

}  // namespace curveflow
