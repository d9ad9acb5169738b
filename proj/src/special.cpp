#include "curveflow/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "curveflow/bvp.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/shapes.hpp"

namespace curveflow {

namespace {

double circle_rtt(double A, double r, double rt) {
    return -(1.0 - A / (r * r)) / (2.0 * (r + A / r)) * rt * rt;
}

}  // namespace

double circle_energy_density(const MetricParams& params, double r, double r_t) {
    return std::numbers::pi * (r + params.A / r) * r_t * r_t;
}

double circle_local_exponent(const MetricParams& params, double r, double r_t) {
    return 1.0 / (1.0 - r * circle_rtt(params.A, r, r_t) / (r_t * r_t));
}

CircleGeodesic circle_geodesic(const MetricParams& params, double r0, double v0, double t_end,
                               std::size_t grid_samples, double rtol) {
    namespace odeint = boost::numeric::odeint;
    params.validate();
    if (!(r0 > 0.0) || !(t_end >= 0.0) || !std::isfinite(v0)) {
        throw CurveError(ErrorCode::InvalidInput, "need r0 > 0, finite v0 and t_end >= 0");
    }
    const double A = params.A;
    using State = std::array<double, 2>;
    auto rhs = [A](const State& y, State& dy, double) {
        dy[0] = y[1];
        dy[1] = circle_rtt(A, y[0], y[1]);
    };
    const double floor_r = 1e-6 * r0;

    CircleGeodesic out;
    out.steps.push_back({0.0, r0, v0});
    std::size_t next_grid = 0;
    auto grid_time = [&](std::size_t k) {
        return grid_samples < 2 ? 0.0 : t_end * static_cast<double>(k) / static_cast<double>(grid_samples - 1);
    };
    if (grid_samples > 0) {
        out.grid.push_back({0.0, r0, v0});
        next_grid = 1;
    }
    if (t_end == 0.0 || v0 == 0.0) {
        // r_t = 0 is an equilibrium of the ODE.
        for (; next_grid < grid_samples; ++next_grid) out.grid.push_back({grid_time(next_grid), r0, v0});
        if (t_end > 0.0) out.steps.push_back({t_end, r0, v0});
        return out;
    }

    auto stepper = odeint::make_dense_output(1e-14 * r0, rtol, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(State{r0, v0}, 0.0, 1e-4 * std::min(t_end, r0 / std::abs(v0)));
    while (stepper.current_time() < t_end) {
        const auto [ta, tb] = stepper.do_step(rhs);
        if (!(tb > ta)) throw CurveError(ErrorCode::StiffnessFailure, "step size underflow");
        const State yb = stepper.current_state();
        const double t_hi = std::min(tb, t_end);
        const bool below = !(yb[0] > floor_r);
        double t_stop = t_hi;
        State ystop = yb;
        if (below) {
            // Bisect for the crossing of the floor radius.
            double lo = ta;
            double hi = tb;
            State tmp;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                stepper.calc_state(mid, tmp);
                (tmp[0] > floor_r ? lo : hi) = mid;
            }
            t_stop = lo;
            stepper.calc_state(lo, ystop);
        } else if (tb > t_end) {
            stepper.calc_state(t_end, ystop);
        }
        while (next_grid < grid_samples && grid_time(next_grid) <= t_stop) {
            State tmp;
            stepper.calc_state(grid_time(next_grid), tmp);
            out.grid.push_back({grid_time(next_grid), tmp[0], tmp[1]});
            ++next_grid;
        }
        out.steps.push_back({t_stop, ystop[0], ystop[1]});
        if (below) {
            out.collapsed = true;
            const double alpha = circle_local_exponent(params, ystop[0], ystop[1]);
            out.collapse_time = t_stop + alpha * ystop[0] / std::abs(ystop[1]);
            return out;
        }
    }
    return out;
}

PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& r, double t0) {
    if (t.size() != r.size() || t.size() < 3) {
        throw CurveError(ErrorCode::InvalidInput, "power-law fit needs >= 3 matching samples");
    }
    const std::size_t n = t.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(std::abs(t[i] - t0));
        ys[i] = std::log(r[i]);
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double dn = static_cast<double>(n);
    const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - icpt - slope * xs[i];
        ss += e * e;
    }
    return {slope, std::exp(icpt), t0, std::sqrt(ss / dn)};
}

PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& r, bool origin_before) {
    if (t.size() < 4) throw CurveError(ErrorCode::InvalidInput, "three-parameter fit needs >= 4 samples");
    const auto [tmin_it, tmax_it] = std::minmax_element(t.begin(), t.end());
    const double span = *tmax_it - *tmin_it;
    const double edge = origin_before ? *tmin_it : *tmax_it;
    auto t0_of = [&](double logd) {
        const double d = std::exp(logd) * span;
        return origin_before ? edge - d : edge + d;
    };
    auto cost = [&](double logd) { return fit_power_law(t, r, t0_of(logd)).rms_log_residual; };

    const double lo = std::log(1e-9);
    const double hi = std::log(1e4);
    const int grid = 400;
    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid; ++k) {
        const double c = cost(lo + (hi - lo) * k / grid);
        if (c < best_cost) {
            best_cost = c;
            best = k;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / grid;
    double b = lo + (hi - lo) * std::min(grid, best + 1) / grid;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (cost(c) < cost(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return fit_power_law(t, r, t0_of(0.5 * (a + b)));
}

PolygonCurve cigar_curve(const MetricParams& params, double segment_length, std::size_t n) {
    if (!(params.A > 0.0)) throw CurveError(ErrorCode::RequiresPositiveA, "the cigar radius is sqrt(A)");
    return make_stadium(n, std::sqrt(params.A), segment_length);
}

double cigar_ode_residual(double theta, double theta_s, double theta_ss, double theta_sss, double A) {
    const double s = std::sin(theta);
    if (std::abs(s) < 1e-6) {
        throw CurveError(ErrorCode::SingularAngle, "|sin theta| < 1e-6 at theta = " + std::to_string(theta));
    }
    const double cot = std::cos(theta) / s;
    return theta_sss - (4.0 * cot * theta_s * theta_ss +
                        (0.5 - cot * cot) * theta_s * (theta_s * theta_s - 1.0 / A));
}

std::vector<double> cigar_ode_residual(const std::vector<double>& theta, double ds, const MetricParams& params) {
    const std::size_t n = theta.size();
    if (n < 5 || !(ds > 0.0)) throw CurveError(ErrorCode::InvalidInput, "need >= 5 samples and ds > 0");
    if (!(params.A > 0.0)) throw CurveError(ErrorCode::RequiresPositiveA, "the cigar equation has 1/A");
    for (double th : theta) {
        if (std::abs(std::sin(th)) < 1e-6) {
            throw CurveError(ErrorCode::SingularAngle, "|sin theta| < 1e-6 at theta = " + std::to_string(th));
        }
    }
    std::vector<double> out;
    out.reserve(n - 4);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double t1 = (theta[i + 1] - theta[i - 1]) / (2.0 * ds);
        const double t2 = (theta[i + 1] - 2.0 * theta[i] + theta[i - 1]) / (ds * ds);
        const double t3 = (theta[i + 2] - 2.0 * theta[i + 1] + 2.0 * theta[i - 1] - theta[i - 2]) / (2.0 * ds * ds * ds);
        out.push_back(cigar_ode_residual(theta[i], t1, t2, t3, params.A));
    }
    return out;
}

CurvePath translation_path(const PolygonCurve& curve, Vec2 displacement, std::size_t time_samples) {
    if (time_samples < 2) throw CurveError(ErrorCode::InvalidInput, "time_samples must be >= 2");
    std::vector<PolygonCurve> slices;
    slices.reserve(time_samples);
    for (std::size_t j = 0; j < time_samples; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(time_samples - 1);
        slices.push_back(curve.translated(t * displacement));
    }
    return horizontal_lift(CurvePath(std::move(slices)));
}

namespace {

// Unsmoothed sawtooth: u is the position inside a tooth in [0, 1).
double sawtooth(double t, double u) {
    const double tri = u < 0.5 ? 2.0 * u : 2.0 - 2.0 * u;  // 0 at tooth edges, 1 at the tip
    return t <= 0.5 ? 2.0 * t * tri : 2.0 * t - 1.0 + 2.0 * (1.0 - t) * tri;
}

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

}  // namespace

double zigzag_time(double t, double theta, int teeth) {
    if (teeth < 1) throw CurveError(ErrorCode::InvalidInput, "teeth must be >= 1");
    const double nt = static_cast<double>(teeth);
    // In tooth units the bump has width 1/8, i.e. half width 1/16.
    const double half = 1.0 / 16.0;
    const double u = theta * nt;
    constexpr int kNodes = 64;
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k <= kNodes; ++k) {
        const double x = -1.0 + 2.0 * k / kNodes;
        const double w = bump(x);
        if (w == 0.0) continue;
        double v = u - half * x;
        v -= std::floor(v);
        num += w * sawtooth(t, v);
        den += w;
    }
    return num / den;
}

CurvePath zigzag_path(const CurvePath& base, int teeth, std::size_t time_samples) {
    if (teeth < 1) throw CurveError(ErrorCode::InvalidInput, "teeth must be >= 1");
    const std::size_t n = base.vertex_count();
    const auto per_tooth = 8 * static_cast<std::size_t>(teeth);
    if (n < per_tooth || time_samples < per_tooth) {
        throw CurveError(ErrorCode::GridTooCoarse, std::to_string(n) + " vertices and " + std::to_string(time_samples) +
                                                       " time samples for " + std::to_string(teeth) +
                                                       " teeth (need 8 per tooth)");
    }
    const std::size_t Tb = base.time_samples();
    std::vector<PolygonCurve> slices;
    slices.reserve(time_samples);
    for (std::size_t j = 0; j < time_samples; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(time_samples - 1);
        std::vector<Vec2> pts(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double theta = static_cast<double>(i) / static_cast<double>(n);
            const double phi = std::clamp(zigzag_time(t, theta, teeth), 0.0, 1.0);
            const double pos = phi * static_cast<double>(Tb - 1);
            const auto k = std::min(static_cast<std::size_t>(pos), Tb - 2);
            const double w = pos - static_cast<double>(k);
            pts[i] = (1.0 - w) * base[k][i] + w * base[k + 1][i];
        }
        slices.emplace_back(std::move(pts));
    }
    return CurvePath(std::move(slices));
}

CurvePath zigzag_base(const PolygonCurve& c0, const PolygonCurve& c1, std::size_t vertices,
                      std::size_t time_samples) {
    const PolygonCurve s = c0.size() == vertices ? c0 : resample_smooth(c0, vertices);
    const PolygonCurve e = c1.size() == vertices ? c1 : resample_smooth(c1, vertices);
    CurvePath blend = linear_blend(s, e, time_samples);
    if (horizontality_defect(blend) <= 1e-6) return blend;
    return horizontal_lift(blend);
}

CurvePath zigzag_path(const PolygonCurve& c0, const PolygonCurve& c1, int teeth, ZigzagGrid grid) {
    if (teeth < 1) throw CurveError(ErrorCode::InvalidInput, "teeth must be >= 1");
    const auto nt = static_cast<std::size_t>(teeth);
    const std::size_t n = grid.vertices != 0 ? grid.vertices : std::max<std::size_t>(64 * nt, 256);
    const std::size_t T = grid.time_samples != 0 ? grid.time_samples : std::max<std::size_t>(8 * nt + 1, 257);
    return zigzag_path(zigzag_base(c0, c1, n, T), teeth, T);
}

}  // namespace curveflow
