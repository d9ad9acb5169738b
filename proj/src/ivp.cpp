#include "curveflow/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "curveflow/errors.hpp"
#include "curveflow/parallel.hpp"

namespace curveflow {

namespace {

constexpr double kHorizontalTolerance = 1e-6;

double dtheta(std::size_t n) { return 2.0 * std::numbers::pi / static_cast<double>(n); }

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Three-point derivatives on a non-uniform periodic grid; hm and hp are the
// spacings to the previous and next sample.
double d1(double fm, double f0, double fp, double hm, double hp) {
    return (hm * hm * (fp - f0) + hp * hp * (f0 - fm)) / (hm * hp * (hm + hp));
}

double d2(double fm, double f0, double fp, double hm, double hp) {
    return 2.0 * (hm * fp - (hm + hp) * f0 + hp * fm) / (hm * hp * (hm + hp));
}

}  // namespace

IntrinsicState initial_state(const PolygonCurve& c0, const NormalField& v) {
    if (v.values.size() != c0.size()) {
        throw CurveError(ErrorCode::SizeMismatch, "velocity has " + std::to_string(v.values.size()) +
                                                      " values for " + std::to_string(c0.size()) + " vertices");
    }
    const CurveGeometry g = analyze(c0);
    const double h = dtheta(c0.size());
    IntrinsicState st{0.0, {}, v.values, g.curvature, c0};
    st.s.resize(c0.size());
    for (std::size_t i = 0; i < c0.size(); ++i) st.s[i] = g.weights[i] / h;
    return st;
}

double stable_step(const IntrinsicState& state, double floor) {
    const double h = dtheta(state.s.size());
    const double smin = *std::min_element(state.s.begin(), state.s.end());
    return 0.25 * (smin * h) * (smin * h) / std::max(max_abs(state.a), floor);
}

IntrinsicState step_a0(const IntrinsicState& state, double dt, double ceiling) {
    const std::size_t n = state.s.size();
    const double h = dtheta(n);
    const auto& s = state.s;
    const auto& a = state.a;
    const auto& k = state.kappa;

    // (a_theta / s) at the half points i + 1/2.
    std::vector<double> flux(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t q = i + 1 == n ? 0 : i + 1;
        flux[i] = (a[q] - a[i]) / h / (0.5 * (s[i] + s[q]));
    }

    const CurveGeometry g = analyze(state.positions);
    IntrinsicState out{state.t + dt, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                       state.positions};
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = i == 0 ? n - 1 : i - 1;
        const double diffusion = (flux[i] - flux[p]) / h / s[i];
        out.s[i] = s[i] - dt * a[i] * k[i] * s[i];
        out.a[i] = a[i] + dt * 0.5 * k[i] * a[i] * a[i];
        out.kappa[i] = k[i] + dt * (a[i] * k[i] * k[i] + diffusion);
        pts[i] = state.positions[i] + (dt * a[i]) * g.normals[i];
    }
    out.positions = PolygonCurve(std::move(pts));
    const double kmax = max_abs(out.kappa);
    if (!(kmax <= ceiling)) {
        throw CurveError(ErrorCode::BlowupDetected,
                         "max |kappa| = " + std::to_string(kmax) + " at t = " + std::to_string(out.t));
    }
    return out;
}

CurvePath Trajectory::as_path() const {
    std::vector<PolygonCurve> curves;
    curves.reserve(states.size());
    for (const auto& st : states) curves.push_back(st.positions);
    return CurvePath(std::move(curves));
}

Trajectory integrate_a0(const PolygonCurve& c0, const NormalField& v, double t_end, double dt,
                        const ShootOptions& options) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) {
        throw CurveError(ErrorCode::InvalidInput, "need dt > 0 and t_end >= 0");
    }
    if (options.record_every < 1) throw CurveError(ErrorCode::InvalidInput, "record_every must be >= 1");
    IntrinsicState st = initial_state(c0, v);
    const double ceiling = options.ceiling.value_or(1e3 / total_length(c0));
    const std::size_t n = c0.size();

    std::vector<double> invariant(n);
    double scale = 0.0;
    double mean_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        invariant[i] = st.s[i] * v.values[i] * v.values[i];
        scale = std::max(scale, v.values[i] * v.values[i]);
        mean_s += st.s[i];
    }
    scale = std::max(scale * mean_s / static_cast<double>(n), 1e-300);

    Trajectory traj;
    auto record = [&](const IntrinsicState& state) {
        double cons = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cons = std::max(cons, std::abs(state.s[i] * state.a[i] * state.a[i] - invariant[i]));
        }
        traj.conservation_error = std::max(traj.conservation_error, cons / scale);
        const auto kpos = vertex_curvature(state.positions);
        for (std::size_t i = 0; i < n; ++i) {
            traj.position_curvature_drift =
                std::max(traj.position_curvature_drift, std::abs(kpos[i] - state.kappa[i]));
        }
        traj.states.push_back(state);
    };
    record(st);

    const auto steps = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
    for (std::size_t m = 1; m <= steps; ++m) {
        const double h = std::min(dt, t_end - st.t);
        if (!(h > 0.0)) break;
        try {
            const auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(h / stable_step(st))));
            const double hs = h / static_cast<double>(sub);
            for (std::size_t k = 0; k < sub; ++k) st = step_a0(st, hs, ceiling);
        } catch (const CurveError& e) {
            if (e.code() != ErrorCode::BlowupDetected && e.code() != ErrorCode::DegenerateCurve) throw;
            traj.blowup = true;
            traj.blowup_time = st.t;
            if (traj.states.back().t != st.t) record(st);
            return traj;
        }
        if (m % options.record_every == 0 || m == steps) record(st);
    }
    return traj;
}

std::vector<std::vector<double>> geodesic_residual(const MetricParams& params, const CurvePath& path) {
    const double defect = horizontality_defect(path);
    if (defect > kHorizontalTolerance) {
        throw CurveError(ErrorCode::NonHorizontalPath,
                         "tangential/normal speed ratio " + std::to_string(defect));
    }
    const std::size_t T = path.time_samples();
    const std::size_t n = path.vertex_count();
    const double dt = path.time_step();
    const double A = params.A;
    if (T < 3) return {};

    std::vector<std::vector<double>> out(T - 2, std::vector<double>(n));
    parallel_for(T - 2, [&](std::size_t jj) {
        const std::size_t j = jj + 1;
        const CurveGeometry g = analyze(path[j]);
        std::vector<double> a(n);
        std::vector<double> at(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 xm = path[j - 1][i];
            const Vec2 x0 = path[j][i];
            const Vec2 xp = path[j + 1][i];
            a[i] = dot(xp - xm, g.normals[i]) / (2.0 * dt);
            at[i] = dot(xp - 2.0 * x0 + xm, g.normals[i]) / (dt * dt);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = i == 0 ? n - 1 : i - 1;
            const std::size_t q = i + 1 == n ? 0 : i + 1;
            const double hm = g.edge_lengths[p];
            const double hp = g.edge_lengths[i];
            const double k = g.curvature[i];
            const double ks = d1(g.curvature[p], k, g.curvature[q], hm, hp);
            const double kss = d2(g.curvature[p], k, g.curvature[q], hm, hp);
            const double as = d1(a[p], a[i], a[q], hm, hp);
            const double ai = a[i];
            const double rhs =
                (0.5 * k * ai * ai +
                 A * (ai * ai * (kss - 0.5 * k * k * k) + 4.0 * ks * ai * as + 2.0 * k * as * as)) /
                (1.0 + A * k * k);
            out[jj][i] = at[i] - rhs;
        }
    });
    return out;
}

}  // namespace curveflow
