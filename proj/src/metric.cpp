#include "curveflow/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "curveflow/errors.hpp"
#include "curveflow/parallel.hpp"

namespace curveflow {

namespace {

constexpr double kHorizontalTolerance = 1e-6;

void require_size(std::size_t n, std::size_t m, const char* what) {
    if (n != m) {
        throw CurveError(ErrorCode::SizeMismatch,
                         std::string(what) + ": " + std::to_string(n) + " vs " + std::to_string(m));
    }
}

// Forward-difference velocity of vertex i between slices j and j+1.
Vec2 velocity(const CurvePath& path, std::size_t j, std::size_t i) {
    return (path[j + 1][i] - path[j][i]) / path.time_step();
}

}  // namespace

void MetricParams::validate() const {
    if (!(A >= 0.0) || !std::isfinite(A)) {
        throw CurveError(ErrorCode::InvalidInput, "A must be finite and >= 0");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw CurveError(ErrorCode::InvalidInput, "epsilon must be finite and >= 0");
    }
}

CurvePath::CurvePath(std::vector<PolygonCurve> curves) : curves_(std::move(curves)) {
    if (curves_.size() < 2) {
        throw CurveError(ErrorCode::InvalidInput, "a path needs at least 2 time samples");
    }
    for (const auto& c : curves_) require_size(c.size(), curves_.front().size(), "path slice vertex count");
}

CurvePath CurvePath::time_reversed() const {
    return CurvePath(std::vector<PolygonCurve>(curves_.rbegin(), curves_.rend()));
}

double inner_product(const MetricParams& params, const PolygonCurve& c, const VectorField& h,
                     const VectorField& k) {
    require_size(c.size(), h.values.size(), "inner_product h");
    require_size(c.size(), k.values.size(), "inner_product k");
    const CurveGeometry g = analyze(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double kap = g.curvature[i];
        sum += (1.0 + params.A * kap * kap) * dot(h.values[i], k.values[i]) * g.weights[i];
    }
    return sum;
}

double normal_inner_product(const MetricParams& params, const PolygonCurve& c, const NormalField& a,
                            const NormalField& b) {
    require_size(c.size(), a.values.size(), "normal_inner_product a");
    require_size(c.size(), b.values.size(), "normal_inner_product b");
    const CurveGeometry g = analyze(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double kap = g.curvature[i];
        sum += (1.0 + params.A * kap * kap) * a.values[i] * b.values[i] * g.weights[i];
    }
    return sum;
}

Decomposition decompose(const PolygonCurve& c, const VectorField& h) {
    require_size(c.size(), h.values.size(), "decompose");
    const CurveGeometry g = analyze(c);
    const std::size_t n = c.size();
    Decomposition d;
    d.tangential.values.resize(n);
    d.normal.values.resize(n);
    d.normal_coeff.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ht = dot(h.values[i], g.tangents[i]);
        const double hn = dot(h.values[i], g.normals[i]);
        d.tangential.values[i] = ht * g.tangents[i];
        d.normal.values[i] = hn * g.normals[i];
        d.normal_coeff.values[i] = hn;
    }
    return d;
}

std::vector<StepTerms> step_terms(const MetricParams& params, const CurvePath& path) {
    const std::size_t steps = path.time_samples() - 1;
    const std::size_t n = path.vertex_count();
    std::vector<StepTerms> out(steps);
    parallel_for(steps, [&](std::size_t j) {
        const CurveGeometry g = analyze(path[j]);
        StepTerms s;
        s.length = g.length;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = dot(velocity(path, j, i), g.normals[i]);
            const double kap = g.curvature[i];
            s.quadratic_form += (1.0 + params.A * kap * kap) * a * a * g.weights[i];
            s.abs_normal_flux += std::abs(a) * g.weights[i];
            s.graph_area_rate += g.weights[i] * std::sqrt(1.0 + a * a);
        }
        out[j] = s;
    });
    return out;
}

double path_energy(const MetricParams& params, const CurvePath& path) {
    double sum = 0.0;
    for (const auto& s : step_terms(params, path)) sum += s.quadratic_form;
    return 0.5 * path.time_step() * sum;
}

double horizontal_path_length(const MetricParams& params, const CurvePath& path) {
    double sum = 0.0;
    for (const auto& s : step_terms(params, path)) sum += std::sqrt(s.quadratic_form);
    return path.time_step() * sum;
}

double horizontality_defect(const CurvePath& path) {
    const std::size_t steps = path.time_samples() - 1;
    const std::size_t n = path.vertex_count();
    std::vector<double> tmax(steps, 0.0);
    std::vector<double> nmax(steps, 0.0);
    parallel_for(steps, [&](std::size_t j) {
        const CurveGeometry g = analyze(path[j]);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 v = velocity(path, j, i);
            tmax[j] = std::max(tmax[j], std::abs(dot(v, g.tangents[i])));
            nmax[j] = std::max(nmax[j], std::abs(dot(v, g.normals[i])));
        }
    });
    const double t = *std::max_element(tmax.begin(), tmax.end());
    const double nn = *std::max_element(nmax.begin(), nmax.end());
    if (nn == 0.0) return t == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return t / nn;
}

double anisotropic_area_energy(const MetricParams& params, const CurvePath& path) {
    const double defect = horizontality_defect(path);
    if (defect > kHorizontalTolerance) {
        throw CurveError(ErrorCode::NonHorizontalPath,
                         "tangential/normal speed ratio " + std::to_string(defect));
    }
    const std::size_t steps = path.time_samples() - 1;
    const std::size_t n = path.vertex_count();
    const double dt = path.time_step();
    std::vector<double> per_step(steps, 0.0);
    parallel_for(steps, [&](std::size_t j) {
        const CurveGeometry g = analyze(path[j]);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // Graph surface S = {(t, c(t, theta))}: tangent vectors
            // (1, c_t) and (0, w T). n_S0 is the t-component of its unit normal.
            const Vec2 v = velocity(path, j, i);
            const Vec2 ct = g.weights[i] * g.tangents[i];
            const double nx = cross(v, ct);
            const double ny = -ct.y;
            const double nz = ct.x;
            const double mag = std::sqrt(nx * nx + ny * ny + nz * nz);
            const double n0 = nx / mag;
            const double n0sq = n0 * n0;
            const double kap = g.curvature[i];
            sum += (1.0 + params.A * kap * kap) * n0sq / std::sqrt(1.0 - n0sq) * mag;
        }
        per_step[j] = sum;
    });
    double total = 0.0;
    for (double s : per_step) total += s;
    return 0.5 * dt * total;
}

double area_swept(const CurvePath& path) {
    double sum = 0.0;
    for (const auto& s : step_terms(MetricParams{}, path)) sum += s.abs_normal_flux;
    return path.time_step() * sum;
}

double graph_area(const CurvePath& path) {
    double sum = 0.0;
    for (const auto& s : step_terms(MetricParams{}, path)) sum += s.graph_area_rate;
    return path.time_step() * sum;
}

LipschitzCertificate lipschitz_certificate(const MetricParams& params, const CurvePath& path) {
    if (!(params.A > 0.0)) {
        throw CurveError(ErrorCode::RequiresPositiveA, "the square-root length bound needs A > 0");
    }
    LipschitzCertificate cert;
    cert.lhs = std::sqrt(total_length(path.back())) - std::sqrt(total_length(path.front()));
    cert.rhs = horizontal_path_length(params, path) / (2.0 * std::sqrt(params.A));
    return cert;
}

namespace {

// Nearest crossing (by |s|) of the line o + s d with the closed polygon p.
Vec2 nearest_crossing(const Vec2& o, const Vec2& d, const PolygonCurve& p) {
    const std::size_t n = p.size();
    double best = std::numeric_limits<double>::infinity();
    Vec2 hit = o;
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2& a = p[k];
        const Vec2 e = p[k + 1 == n ? 0 : k + 1] - a;
        const double den = cross(d, e);
        if (den == 0.0) continue;
        const Vec2 ao = a - o;
        const double s = cross(ao, e) / den;
        const double u = cross(ao, d) / den;
        if (u < 0.0 || u > 1.0) continue;
        if (std::abs(s) < best) {
            best = std::abs(s);
            hit = o + s * d;
        }
    }
    if (!std::isfinite(best)) {
        throw CurveError(ErrorCode::InvalidInput, "normal line misses the next slice");
    }
    return hit;
}

}  // namespace

CurvePath horizontal_lift(const CurvePath& path) {
    std::vector<PolygonCurve> out;
    out.reserve(path.time_samples());
    out.push_back(path.front());
    const std::size_t n = path.vertex_count();
    for (std::size_t j = 1; j < path.time_samples(); ++j) {
        const PolygonCurve& prev = out.back();
        const CurveGeometry g = analyze(prev);
        std::vector<Vec2> pts(n);
        parallel_for(n, [&](std::size_t i) { pts[i] = nearest_crossing(prev[i], g.normals[i], path[j]); });
        out.emplace_back(std::move(pts));
    }
    return CurvePath(std::move(out));
}

std::vector<CertificateCheck> check_certificates(const MetricParams& params, const CurvePath& path,
                                                 double abs_slack, double rel_slack) {
    const auto terms = step_terms(params, path);
    const double dt = path.time_step();
    double length = 0.0;
    double energy = 0.0;
    double swept = 0.0;
    double area = 0.0;
    double max_len = total_length(path.back());
    for (const auto& s : terms) {
        length += std::sqrt(s.quadratic_form);
        energy += s.quadratic_form;
        swept += s.abs_normal_flux;
        area += s.graph_area_rate;
        max_len = std::max(max_len, s.length);
    }
    length *= dt;
    energy *= 0.5 * dt;
    swept *= dt;
    area *= dt;

    auto make = [&](std::string name, double lhs, double rhs) {
        return CertificateCheck{std::move(name), lhs, rhs,
                                lhs <= rhs + abs_slack + rel_slack * std::abs(rhs)};
    };
    std::vector<CertificateCheck> out;
    if (params.A > 0.0) {
        const double lhs = std::sqrt(total_length(path.back())) - std::sqrt(total_length(path.front()));
        out.push_back(make("sqrt_length_lipschitz", lhs, length / (2.0 * std::sqrt(params.A))));
    }
    out.push_back(make("area_swept", swept, std::sqrt(max_len) * length));
    out.push_back(make("graph_area", area, 2.0 * energy + max_len));
    return out;
}

GeodesicReport make_report(const MetricParams& params, const CurvePath& path) {
    GeodesicReport r;
    r.energy = path_energy(params, path);
    r.path_length = horizontal_path_length(params, path);
    r.area_swept = area_swept(path);
    r.graph_area = graph_area(path);
    const auto checks = check_certificates(params, path);
    r.certificates_passed = true;
    for (const auto& c : checks) {
        r.certificates_passed = r.certificates_passed && c.passed;
        if (c.name == "sqrt_length_lipschitz") {
            r.lipschitz_lhs = c.lhs;
            r.lipschitz_rhs = c.rhs;
        } else if (c.name == "area_swept") {
            r.area_swept_bound = c.rhs;
        } else if (c.name == "graph_area") {
            r.graph_area_bound = c.rhs;
        }
    }
    return r;
}

}  // namespace curveflow
