#include "curveflow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curveflow/errors.hpp"
#include "curveflow/shapes.hpp"

namespace curveflow {

namespace {

Vec2 centroid(const PolygonCurve& c) {
    Vec2 s;
    for (const auto& v : c.vertices()) s += v;
    return s / static_cast<double>(c.size());
}

double circle_oracle_length(double A) {
    // Composite Simpson on [1, 2]; the integrand is smooth.
    const int m = 2000;
    const double h = 1.0 / m;
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double r = 1.0 + k * h;
        const double f = std::sqrt(2.0 * std::numbers::pi * (r + A / r));
        s += (k == 0 || k == m ? 1.0 : (k % 2 ? 4.0 : 2.0)) * f;
    }
    return s * h / 3.0;
}

// Index offset s with b[i] == a[(i + s) % n] for two samplings of the same
// polygon; falls back to the nearest vertex-0 match.
std::size_t matching_shift(const PolygonCurve& a, const PolygonCurve& b) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < a.size(); ++s) {
        const double d = norm2(a[s] - b[0]);
        if (d < best_d) {
            best_d = d;
            best = s;
        }
    }
    return best;
}

NormalField normal_part(const PolygonCurve& c, const std::vector<Vec2>& v) {
    const auto normals = vertex_normals(c);
    NormalField out;
    out.values.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out.values[i] = dot(v[i], normals[i]);
    return out;
}

}  // namespace

CircleBenchmark run_circle_benchmark(const MetricParams& params, const SolverConfig& config) {
    CircleBenchmark out{solve_geodesic(params, config, make_circle(config.vertices, 1.0),
                                       make_circle(config.vertices, 2.0)),
                        0.0, 0.0};
    const CurvePath& p = out.solution.path;
    for (std::size_t j = 1; j + 1 < p.time_samples(); ++j) {
        const Vec2 c = centroid(p[j]);
        double mean = 0.0;
        for (const auto& v : p[j].vertices()) mean += norm(v - c);
        mean /= static_cast<double>(p.vertex_count());
        double var = 0.0;
        for (const auto& v : p[j].vertices()) var += (norm(v - c) - mean) * (norm(v - c) - mean);
        var /= static_cast<double>(p.vertex_count());
        out.max_radius_spread = std::max(out.max_radius_spread, std::sqrt(var) / mean);
    }
    const double L = circle_oracle_length(params.A);
    out.oracle_energy = 0.5 * L * L;
    return out;
}

CigarBenchmark run_cigar_benchmark(const MetricParams& params, const SolverConfig& config, double distance) {
    CigarBenchmark out{solve_geodesic(params, config, make_circle(config.vertices, 1.0),
                                      make_circle(config.vertices, 1.0, {distance, 0.0})),
                       0.0, 0.0, 0.0};
    const CurvePath& p = out.solution.path;
    const PolygonCurve& mid = p[p.time_samples() / 2];
    double xmin = mid[0].x, xmax = mid[0].x, ymin = mid[0].y, ymax = mid[0].y;
    for (const auto& v : mid.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    out.middle_width = ymax - ymin;
    out.middle_length = xmax - xmin;
    out.elongation = out.middle_length / out.middle_width;
    return out;
}

PolygonCurve triangle_ellipse(std::size_t n, double rotation) {
    const PolygonCurve fine = make_ellipse(64 * n, 1.0, 1.0 / 3.0);
    return resample_constant_speed(fine, n).rotated(rotation);
}

double normal_angle_deg(const MetricParams& params, const PolygonCurve& c, const NormalField& u,
                        const NormalField& v) {
    const double uv = normal_inner_product(params, c, u, v);
    const double uu = normal_inner_product(params, c, u, u);
    const double vv = normal_inner_product(params, c, v, v);
    if (!(uu > 0.0) || !(vv > 0.0)) throw CurveError(ErrorCode::DegeneratePlane, "zero velocity at a corner");
    const double cosang = std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
    return std::acos(cosang) * 180.0 / std::numbers::pi;
}

TriangleResult run_triangle(const MetricParams& params, const SolverConfig& config) {
    const double deg = std::numbers::pi / 180.0;
    const std::size_t n = config.vertices;
    const PolygonCurve E[3] = {triangle_ellipse(n, 0.0), triangle_ellipse(n, 60.0 * deg),
                               triangle_ellipse(n, 120.0 * deg)};
    TriangleResult out;
    for (int k = 0; k < 3; ++k) out.sides.push_back(solve_geodesic(params, config, E[k], E[(k + 1) % 3]));

    for (int k = 0; k < 3; ++k) {
        // Corner E_k: side k leaves it forwards, side k-1 arrives at it.
        const CurvePath& out_side = out.sides[static_cast<std::size_t>(k)].path;
        const CurvePath& in_side = out.sides[static_cast<std::size_t>((k + 2) % 3)].path;
        const PolygonCurve& base = out_side.front();
        std::vector<Vec2> v1(n), v2(n);
        for (std::size_t i = 0; i < n; ++i) v1[i] = out_side[1][i] - out_side[0][i];
        const std::size_t T = in_side.time_samples();
        const std::size_t s = matching_shift(base, in_side[T - 1]);
        for (std::size_t i = 0; i < n; ++i) v2[(i + s) % n] = in_side[T - 2][i] - in_side[T - 1][i];
        out.angles_deg[static_cast<std::size_t>(k)] =
            normal_angle_deg(params, base, normal_part(base, v1), normal_part(base, v2));
    }
    out.angle_sum_deg = out.angles_deg[0] + out.angles_deg[1] + out.angles_deg[2];
    return out;
}

double cubic_bspline(double x) {
    const double ax = std::abs(x);
    if (ax >= 2.0) return 0.0;
    if (ax >= 1.0) {
        const double u = 2.0 - ax;
        return u * u * u / 6.0;
    }
    return 2.0 / 3.0 - ax * ax + 0.5 * ax * ax * ax;
}

BumpSetup make_bump_setup(std::size_t n, double amplitude) {
    if (n < 64) throw CurveError(ErrorCode::InvalidInput, "the bump setup needs at least 64 vertices");
    // Stadium of radius 1 with a bottom run of length 8; the bump occupies
    // the middle 2 units of the run, where the curve is straight.
    const PolygonCurve curve = make_stadium(n, 1.0, 8.0);
    BumpSetup out{curve, NormalField{std::vector<double>(n, 0.0)}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = curve[i];
        if (std::abs(p.y + 1.0) > 1e-12) continue;
        const double v = amplitude * 1.5 * cubic_bspline(2.0 * p.x);
        if (v != 0.0) {
            out.velocity.values[i] = v;
            out.support.push_back(i);
        }
    }
    return out;
}

}  // namespace curveflow
