#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "curveflow/bvp.hpp"
#include "curveflow/curve.hpp"
#include "curveflow/metric.hpp"

namespace curveflow {

/// Circles r = 1 -> 2 with a common centre.
struct CircleBenchmark {
    GeodesicSolution solution;
    /// max over interior slices of (std / mean) of the vertex distances to the slice centroid
    double max_radius_spread = 0.0;
    /// L^2 / 2 with L = int_1^2 sqrt(2 pi (r + A/r)) dr
    double oracle_energy = 0.0;
};

CircleBenchmark run_circle_benchmark(const MetricParams& params, const SolverConfig& config);

/// Unit circles with centres `distance` apart along the x axis.
struct CigarBenchmark {
    GeodesicSolution solution;
    double middle_width = 0.0;       ///< extent of the middle slice across the translation
    double middle_length = 0.0;      ///< extent along the translation
    double elongation = 0.0;         ///< length / width
};

CigarBenchmark run_cigar_benchmark(const MetricParams& params, const SolverConfig& config, double distance = 3.0);

/// Geodesic triangle between three ellipses (semi-axes 1 and 1/3) at 0, 60
/// and 120 degrees. The angle at each corner is the arccos of the normalized
/// G^A inner product of the normal parts of the two outgoing first-difference
/// velocities.
struct TriangleResult {
    std::vector<GeodesicSolution> sides;  ///< E0->E1, E1->E2, E2->E0
    std::array<double, 3> angles_deg{};
    double angle_sum_deg = 0.0;
};

TriangleResult run_triangle(const MetricParams& params, const SolverConfig& config);

/// Ellipse with semi-axes 1 and 1/3 at `rotation`, constant speed, vertex 0
/// at the rotated major-axis tip.
PolygonCurve triangle_ellipse(std::size_t n, double rotation);

/// Angle in degrees between two normal velocities on the same curve.
double normal_angle_deg(const MetricParams& params, const PolygonCurve& c, const NormalField& u,
                        const NormalField& v);

/// Long closed curve with a straight bottom run and a C^2 cubic B-spline
/// bump velocity supported inside that run.
struct BumpSetup {
    PolygonCurve curve;
    NormalField velocity;
    std::vector<std::size_t> support;  ///< vertices with nonzero velocity
};

BumpSetup make_bump_setup(std::size_t n, double amplitude = 1.0);

/// Cubic B-spline on the knots -2..2 (C^2, support (-2, 2), peak 2/3 at 0).
double cubic_bspline(double x);

}  // namespace curveflow
