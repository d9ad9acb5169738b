#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/metric.hpp"

namespace curveflow {

/// Intrinsic variables of a horizontal A=0 geodesic on the uniform grid
/// theta_i = 2 pi i / n: s = |c_theta|, normal speed a, curvature kappa, plus
/// the positions advanced along the normals.
struct IntrinsicState {
    double t = 0.0;
    std::vector<double> s;
    std::vector<double> a;
    std::vector<double> kappa;
    PolygonCurve positions;
};

/// State at t = 0: s from the vertex weights, kappa from the polygon, a = v.
IntrinsicState initial_state(const PolygonCurve& c0, const NormalField& v);

/// One explicit Euler step of
///   s_t = -a kappa s,  a_t = kappa a^2 / 2,  kappa_t = a kappa^2 + (1/s)(a_theta / s)_theta
/// with a staggered central difference for the last term. Positions move by
/// dt * a along the current vertex normals. Throws BlowupDetected when the
/// new max |kappa| exceeds `ceiling`.
IntrinsicState step_a0(const IntrinsicState& state, double dt, double ceiling);

/// Largest step the explicit scheme accepts for `state`:
///   0.25 (min_i s_i dtheta)^2 / max(max |a|, floor).
double stable_step(const IntrinsicState& state, double floor = 1e-3);

struct ShootOptions {
    /// Curvature ceiling; default 1e3 / length(c0).
    std::optional<double> ceiling;
    /// Keep every k-th macro step (the last state is always kept).
    std::size_t record_every = 1;
};

struct Trajectory {
    std::vector<IntrinsicState> states;
    bool blowup = false;
    double blowup_time = 0.0;
    /// max |s a^2 - v^2 s0| / max(max v^2 * mean s0, tiny) over retained states.
    double conservation_error = 0.0;
    /// max |kappa - curvature of positions| over retained states.
    double position_curvature_drift = 0.0;
    /// Retained positions as a path (needs >= 2 states).
    CurvePath as_path() const;
};

/// Integrates to t_end with macro step dt. A macro step larger than
/// stable_step is split into equal sub-steps. Blow-up stops the run and
/// returns what was computed so far with blowup = true.
Trajectory integrate_a0(const PolygonCurve& c0, const NormalField& v, double t_end, double dt,
                        const ShootOptions& options = {});

/// Per (t_j, theta_i) residual a_t - RHS of the horizontal geodesic equation
///   a_t = [kappa a^2 / 2 + A (a^2 (kappa_ss - kappa^3 / 2) + 4 kappa_s a a_s + 2 kappa a_s^2)] / (1 + A kappa^2)
/// at the interior slices j = 1..T-2, with
///   a   = <x_{j+1} - x_{j-1}, n_j> / (2 dt)
///   a_t = <x_{j+1} - 2 x_j + x_{j-1}, n_j> / dt^2
/// and arc-length derivatives from three-point formulas on the slice.
/// Throws NonHorizontalPath when horizontality_defect exceeds 1e-6.
std::vector<std::vector<double>> geodesic_residual(const MetricParams& params, const CurvePath& path);

}  // namespace curveflow
