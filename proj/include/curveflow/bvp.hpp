#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/metric.hpp"

namespace curveflow {

enum class Initializer { LinearBlend, ProvidedPath };

struct SolverConfig {
    int max_iterations = 20000;
    /// Converged when the gradient infinity norm drops to this value ...
    double gradient_tolerance = 1e-10;
    /// ... or to this fraction of the initial gradient norm (0 disables).
    double relative_tolerance = 1e-4;
    std::size_t time_samples = 20;
    std::size_t vertices = 48;
    double epsilon = 0.05;
    Initializer initializer = Initializer::LinearBlend;
    std::size_t history = 12;

    /// Throws InvalidInput unless T >= 3, n >= 8 and tolerances are positive.
    void validate() const;
};

/// Sum over vertices (i, j) and the four triangles a=(i,j), b=(i+-1,j),
/// c=(i,j+-1) of
///   (<x_a-x_b, (x_a-x_c)^perp>^2 + eps <x_a-x_b, x_a-x_c>^2) / |x_a-x_b| * (1 + A k(i,j))
/// with
///   k(i,j) = 1/2 (|x_{i-1}-x_i|^-4 + |x_i-x_{i+1}|^-4) |x_{i-1} - 2 x_i + x_{i+1}|^2
/// (the squared curvature plus the squared acceleration of the
/// parametrization). Triangles whose time neighbour leaves [0, T-1] are
/// skipped. Uses params.epsilon.
double discrete_energy(const MetricParams& params, const CurvePath& path);

/// Gradient of discrete_energy, one 2D vector per vertex of every slice.
/// The first and last slices are fixed and get zero rows.
struct PathGradient {
    std::vector<std::vector<Vec2>> slices;
    double max_abs() const;
};

PathGradient energy_gradient(const MetricParams& params, const CurvePath& path);

/// Cyclic shift s minimizing sum_i |start_i - end_{i+s}|^2.
std::size_t best_cyclic_shift(const PolygonCurve& start, const PolygonCurve& end);

/// x_{i,j} = (1 - t_j) start_i + t_j end_{i+s} with s from best_cyclic_shift.
CurvePath linear_blend(const PolygonCurve& start, const PolygonCurve& end, std::size_t time_samples);

struct GeodesicSolution {
    CurvePath path;
    GeodesicReport report;
};

/// Minimizes discrete_energy over the interior slices with the endpoints
/// fixed (limited-memory quasi-Newton, Armijo backtracking). Endpoints whose
/// vertex count differs from config.vertices are resampled at constant
/// speed. Trial iterates with an edge shorter than 1e-3 of the mean edge of
/// their slice are rejected. Never throws on non-convergence; the report
/// carries converged = false instead.
GeodesicSolution solve_geodesic(const MetricParams& params, const SolverConfig& config,
                                const PolygonCurve& start, const PolygonCurve& end);

/// Same, starting from a given path (config.initializer is ignored).
GeodesicSolution solve_geodesic(const MetricParams& params, const SolverConfig& config,
                                const CurvePath& initial);

}  // namespace curveflow
