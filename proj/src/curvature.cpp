#include "curveflow/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "curveflow/errors.hpp"

namespace curveflow {

namespace {

void require_size(std::size_t n, std::size_t m, const char* what) {
    if (n != m) {
        throw CurveError(ErrorCode::SizeMismatch,
                         std::string(what) + ": " + std::to_string(m) + " values for " + std::to_string(n) +
                             " vertices");
    }
}

}  // namespace

ChartFrame::ChartFrame(PolygonCurve base) : base_(std::move(base)) {
    const CurveGeometry g = analyze(base_);
    const double mean = g.length / static_cast<double>(base_.size());
    for (double l : g.edge_lengths) {
        if (std::abs(l - mean) > 1e-10 * mean) {
            throw CurveError(ErrorCode::InvalidInput, "chart base must have constant edge length");
        }
    }
    spacing_ = mean;
    kappa_ = g.curvature;
    kappa_s_ = d1(kappa_);
    kappa_ss_ = d2(kappa_);
}

std::vector<double> ChartFrame::d1(const std::vector<double>& f) const {
    require_size(size(), f.size(), "ChartFrame::d1");
    return periodic_d1(f, spacing_);
}

std::vector<double> ChartFrame::d2(const std::vector<double>& f) const {
    require_size(size(), f.size(), "ChartFrame::d2");
    return periodic_d2(f, spacing_);
}

double ChartFrame::integrate(const std::vector<double>& f) const {
    require_size(size(), f.size(), "ChartFrame::integrate");
    double s = 0.0;
    for (double v : f) s += v;
    return s * spacing_;
}

std::vector<double> christoffel_at_center(const MetricParams& params, const ChartFrame& frame,
                                          const std::vector<double>& h, const std::vector<double>& k) {
    const double A = params.A;
    const auto hs = frame.d1(h);
    const auto ks = frame.d1(k);
    const auto& kap = frame.curvature();
    const auto& kap_s = frame.curvature_s();
    const auto& kap_ss = frame.curvature_ss();
    std::vector<double> out(frame.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double c = kap[i];
        out[i] = ((0.5 * c - 0.5 * A * c * c * c + A * kap_ss[i]) * h[i] * k[i] +
                  2.0 * A * kap_s[i] * (hs[i] * k[i] + h[i] * ks[i]) + 2.0 * A * c * hs[i] * ks[i]) /
                 (1.0 + A * c * c);
    }
    return out;
}

namespace {

std::vector<double> wronskian(const ChartFrame& frame, const std::vector<double>& m, const std::vector<double>& h) {
    const auto ms = frame.d1(m);
    const auto hs = frame.d1(h);
    std::vector<double> w(m.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = m[i] * hs[i] - h[i] * ms[i];
    return w;
}

}  // namespace

double curvature_tensor_value(const MetricParams& params, const ChartFrame& frame, const std::vector<double>& m,
                              const std::vector<double>& h) {
    const double A = params.A;
    const auto W = wronskian(frame, m, h);
    const auto Ws = frame.d1(W);
    const auto& kap = frame.curvature();
    const auto& kap_s = frame.curvature_s();
    const auto& kap_ss = frame.curvature_ss();
    std::vector<double> integrand(W.size());
    for (std::size_t i = 0; i < W.size(); ++i) {
        const double c = kap[i];
        const double t = A * c * c - 1.0;
        const double coef =
            (-t * t + 4.0 * A * A * c * kap_ss[i] - 8.0 * A * A * kap_s[i] * kap_s[i]) / (2.0 * (1.0 + A * c * c));
        integrand[i] = coef * W[i] * W[i] + A * Ws[i] * Ws[i];
    }
    return frame.integrate(integrand);
}

double curvature_tensor_value_a0(const ChartFrame& frame, const std::vector<double>& m,
                                 const std::vector<double>& h) {
    auto W = wronskian(frame, m, h);
    for (auto& w : W) w = -0.5 * w * w;
    return frame.integrate(W);
}

double sectional_curvature(const MetricParams& params, const ChartFrame& frame, const std::vector<double>& m,
                           const std::vector<double>& h) {
    require_size(frame.size(), m.size(), "sectional_curvature m");
    require_size(frame.size(), h.size(), "sectional_curvature h");
    const NormalField mf{m};
    const NormalField hf{h};
    const double mm = normal_inner_product(params, frame.base(), mf, mf);
    const double hh = normal_inner_product(params, frame.base(), hf, hf);
    const double mh = normal_inner_product(params, frame.base(), mf, hf);
    const double gram = mm * hh - mh * mh;
    if (!(gram >= 1e-12 * mm * hh) || !(mm * hh > 0.0)) {
        throw CurveError(ErrorCode::DegeneratePlane, "fields span less than a plane");
    }
    return -curvature_tensor_value(params, frame, m, h) / gram;
}

std::vector<double> circle_operator_spectrum(const MetricParams& params, double r, int n_max) {
    const double A = params.A;
    if (!(A > 0.0)) throw CurveError(ErrorCode::RequiresPositiveA, "the operator S is defined for A > 0");
    if (!(r > 0.0) || n_max < 0) throw CurveError(ErrorCode::InvalidInput, "need r > 0 and n_max >= 0");
    const double k2 = 1.0 / (r * r);
    const double t = A * k2 - 1.0;
    const double constant = t * t / (2.0 * A * (1.0 + A * k2));
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double freq = static_cast<double>(n) / r;
        out[static_cast<std::size_t>(n)] = -freq * freq + constant;
    }
    return out;
}

double circle_jacobi_lambda(const MetricParams& params, double r, int n) {
    const double A = params.A;
    const double q = r + A / r;
    const double t = 1.0 - A / (r * r);
    const double n2 = static_cast<double>(n) * n;
    return -t * t / (2.0 * q * q) * n2 + A / (r * r * r * q) * n2 * n2;
}

double circle_jacobi_potential(const MetricParams& params, double r, int n) {
    const double A = params.A;
    const double q = r + A / r;
    const double t = 1.0 - A / (r * r);
    const double n2 = static_cast<double>(n) * n;
    return -t * t / (2.0 * q * q) * (n2 - 0.625) + A / (r * r * r * q) * (n2 * n2 - 0.5);
}

JacobiSolution jacobi_field_on_circles(const MetricParams& params, int n, std::pair<double, double> r_range,
                                       double dr) {
    namespace odeint = boost::numeric::odeint;
    const double A = params.A;
    if (!(A > 0.0)) throw CurveError(ErrorCode::RequiresPositiveA, "the Jacobi integration needs A > 0");
    const auto [r_lo, r_hi] = r_range;
    if (n < 1 || !(r_lo > 0.0) || !(r_hi > r_lo) || !(dr > 0.0)) {
        throw CurveError(ErrorCode::InvalidInput, "need n >= 1, 0 < r_lo < r_hi and dr > 0");
    }
    const double sqrtA = std::sqrt(A);
    const double r0 = std::min(1e-3 * sqrtA, 0.5 * r_lo);

    // Near r = 0 the potential behaves like mu / r^2; b ~ r^p with p the
    // positive root of p (p - 1) = mu.
    const double n2 = static_cast<double>(n) * n;
    const double mu = n2 * n2 - 0.5 * n2 - 3.0 / 16.0;
    const double p = 0.5 + std::sqrt(0.25 + mu);

    // With x = log r, b(r) = rho sin(phi), r b'(r) = rho cos(phi):
    //   phi_x     = cos^2 - sin cos - W sin^2
    //   log_rho_x = sin cos + cos^2 + W sin cos,   W = r^2 potential(r).
    using State = std::array<double, 2>;
    auto rhs = [&](const State& y, State& dy, double x) {
        const double r = std::exp(x);
        const double W = r * r * circle_jacobi_potential(params, r, n);
        const double s = std::sin(y[0]);
        const double c = std::cos(y[0]);
        dy[0] = c * c - s * c - W * s * s;
        dy[1] = s * c + c * c + W * s * c;
    };

    auto stepper = odeint::make_dense_output(1e-12, 1e-12, odeint::runge_kutta_dopri5<State>());
    const double x0 = std::log(r0);
    const double x_end = std::log(r_hi);
    State y0{std::atan(1.0 / p), 0.0};
    stepper.initialize(y0, x0, 1e-3);

    JacobiSolution sol;
    sol.start_exponent = p;
    std::vector<double> log_amp;
    const auto samples = static_cast<std::size_t>(std::floor((r_hi - r_lo) / dr + 1e-9)) + 1;
    std::size_t next_sample = 0;
    auto a_from = [&](double r, const State& y, double& lg) {
        const double q = r + A / r;
        lg = y[1] - 0.25 * std::log(q);
        return std::sin(y[0]);
    };

    const double zero_tol = 1e-10 * sqrtA;
    int guard = 0;
    while (stepper.current_time() < x_end) {
        if (++guard > 10000000) throw CurveError(ErrorCode::StiffnessFailure, "too many steps");
        const auto [xa, xb] = stepper.do_step(rhs);
        if (!(xb - xa > 1e-14 * std::max(1.0, std::abs(xb)))) {
            throw CurveError(ErrorCode::StiffnessFailure, "step size underflow at r = " + std::to_string(std::exp(xa)));
        }
        const State ya = stepper.previous_state();
        const State yb = stepper.current_state();
        // Crossings of phi through multiples of pi are the zeros of b.
        const double ka = std::floor(ya[0] / std::numbers::pi);
        const double kb = std::floor(yb[0] / std::numbers::pi);
        for (double k = ka + 1; k <= kb; ++k) {
            const double target = k * std::numbers::pi;
            double lo = xa;
            double hi = xb;
            State tmp;
            while (std::exp(hi) - std::exp(lo) > zero_tol) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;  // r beyond 1e-10 sqrt(A) resolution
                stepper.calc_state(mid, tmp);
                (tmp[0] < target ? lo : hi) = mid;
            }
            const double rz = std::exp(0.5 * (lo + hi));
            if (rz >= r_lo && rz <= r_hi) sol.zeros.push_back(rz);
        }
        while (next_sample < samples) {
            const double r = r_lo + dr * static_cast<double>(next_sample);
            const double x = std::log(r);
            if (x > xb) break;
            State tmp;
            if (x <= xa) {
                tmp = ya;
                if (x < xa) stepper.calc_state(x, tmp);
            } else {
                stepper.calc_state(x, tmp);
            }
            double lg = 0.0;
            const double s = a_from(r, tmp, lg);
            sol.r.push_back(r);
            sol.a.push_back(s);
            log_amp.push_back(lg);
            ++next_sample;
        }
    }
    if (!log_amp.empty()) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < log_amp.size(); ++i) {
            if (sol.a[i] != 0.0) best = std::max(best, log_amp[i] + std::log(std::abs(sol.a[i])));
        }
        for (std::size_t i = 0; i < log_amp.size(); ++i) sol.a[i] *= std::exp(log_amp[i] - best);
    }
    return sol;
}

}  // namespace curveflow
