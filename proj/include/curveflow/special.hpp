#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/metric.hpp"

namespace curveflow {

struct CircleSample {
    double t = 0.0;
    double r = 0.0;
    double r_t = 0.0;
};

struct CircleGeodesic {
    /// One sample per accepted adaptive step (dense near a collapse).
    std::vector<CircleSample> steps;
    /// Uniform samples on [0, t_end] (or up to the collapse) when requested.
    std::vector<CircleSample> grid;
    bool collapsed = false;
    /// Extrapolated time at which r reaches 0.
    double collapse_time = 0.0;
};

/// Radius of the concentric-circle geodesic
///   r_tt + (1 - A/r^2) / (2 (r + A/r)) r_t^2 = 0,  r(0) = r0, r_t(0) = v0,
/// by an adaptive Dormand-Prince 5(4) stepper (relative tolerance `rtol`).
/// Stops when r falls below 1e-6 r0 and reports the collapse.
CircleGeodesic circle_geodesic(const MetricParams& params, double r0, double v0, double t_end,
                               std::size_t grid_samples = 0, double rtol = 1e-12);

/// Conserved energy density pi (r + A/r) r_t^2 of the concentric circles.
double circle_energy_density(const MetricParams& params, double r, double r_t);

/// Exponent alpha of r = C (t - t0)^alpha implied by the ODE at (r, r_t):
/// alpha = 1 / (1 - r r_tt / r_t^2).
double circle_local_exponent(const MetricParams& params, double r, double r_t);

struct PowerLawFit {
    double exponent = 0.0;
    double coefficient = 0.0;
    double t0 = 0.0;
    double rms_log_residual = 0.0;
};

/// Least-squares fit of log r = log C + alpha log |t - t0| with t0 fixed.
PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& r, double t0);

/// Three-parameter fit: also searches t0 outside the data range (before the
/// first sample when `origin_before` is true, after the last otherwise).
PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& r, bool origin_before);

/// Two half circles of radius sqrt(A) joined by straight segments of
/// `segment_length` along the x axis, width 2 sqrt(A), sampled at equal arc
/// length with vertex 0 at the middle of the bottom segment.
/// Throws RequiresPositiveA.
PolygonCurve cigar_curve(const MetricParams& params, double segment_length, std::size_t n);

/// theta_sss - [4 cot(theta) theta_s theta_ss + (1/2 - cot^2 theta) theta_s (theta_s^2 - 1/A)]
/// for exact derivatives. Throws SingularAngle when |sin theta| < 1e-6.
double cigar_ode_residual(double theta, double theta_s, double theta_ss, double theta_sss, double A);

/// Same residual for theta sampled with uniform arc-length spacing ds, using
/// central differences; one value per sample i = 2..n-3.
/// Throws SingularAngle, InvalidInput (fewer than 5 samples).
std::vector<double> cigar_ode_residual(const std::vector<double>& theta, double ds, const MetricParams& params);

/// Translation of `curve` by `displacement` over [0, 1], lifted so that every
/// vertex moves normally. The lift crowds vertices toward the trailing side;
/// past a displacement of about 1.5 times the half-extent along the motion the
/// crowded vertices cross and the lift fails (InvalidInput or DegenerateCurve).
CurvePath translation_path(const PolygonCurve& curve, Vec2 displacement, std::size_t time_samples);

/// Sawtooth time change phi(t, theta), theta in [0, 1), with `teeth` teeth:
/// for t <= 1/2 it grows to a zigzag of height 1, for t >= 1/2 the teeth are
/// removed again. Corners are smoothed by a compact bump of width
/// 1 / (8 teeth) in theta.
double zigzag_time(double t, double theta, int teeth);

struct ZigzagGrid {
    std::size_t vertices = 0;      ///< 0: 64 per tooth (at least the base count)
    std::size_t time_samples = 0;  ///< 0: 8 per tooth, at least 257
};

/// c~(t, theta) = c(phi(t, theta), theta) for the horizontal base path c,
/// linearly interpolated between base slices. The base must have
/// grid.vertices vertices; throws GridTooCoarse with fewer than 8 vertices
/// or time samples per tooth.
CurvePath zigzag_path(const CurvePath& base, int teeth, std::size_t time_samples);

/// Builds the horizontal base from c0 to c1 (resample_smooth to the grid's vertex
/// count, linear blend, normal lift) and applies the zigzag.
CurvePath zigzag_path(const PolygonCurve& c0, const PolygonCurve& c1, int teeth, ZigzagGrid grid = {});

/// The horizontal base path used by the second overload.
CurvePath zigzag_base(const PolygonCurve& c0, const PolygonCurve& c1, std::size_t vertices,
                      std::size_t time_samples);

}  // namespace curveflow
