#include "curveflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include "curveflow/errors.hpp"

namespace curveflow {

namespace {

constexpr double kDegenerateEdgeFraction = 1e-12;

std::size_t next(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }
std::size_t prev(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw CurveError(ErrorCode::SizeMismatch,
                         std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

PolygonCurve::PolygonCurve(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
        throw CurveError(ErrorCode::InvalidInput, "a closed curve needs at least 3 vertices");
    }
    for (const auto& v : vertices_) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw CurveError(ErrorCode::InvalidInput, "non-finite vertex coordinate");
        }
    }
}

const Vec2& PolygonCurve::wrapped(std::ptrdiff_t i) const noexcept {
    const auto n = static_cast<std::ptrdiff_t>(vertices_.size());
    return vertices_[static_cast<std::size_t>(((i % n) + n) % n)];
}

PolygonCurve PolygonCurve::reversed() const {
    // Keep vertex 0 as the basepoint so that reversal is an involution on
    // indices: i -> -i mod n.
    std::vector<Vec2> out(vertices_.size());
    out[0] = vertices_[0];
    std::reverse_copy(vertices_.begin() + 1, vertices_.end(), out.begin() + 1);
    return PolygonCurve(std::move(out));
}

PolygonCurve PolygonCurve::translated(const Vec2& offset) const {
    auto out = vertices_;
    for (auto& v : out) v += offset;
    return PolygonCurve(std::move(out));
}

PolygonCurve PolygonCurve::scaled(double factor) const {
    auto out = vertices_;
    for (auto& v : out) v *= factor;
    return PolygonCurve(std::move(out));
}

PolygonCurve PolygonCurve::rotated(double angle) const {
    auto out = vertices_;
    for (auto& v : out) v = rotate(v, angle);
    return PolygonCurve(std::move(out));
}

PolygonCurve PolygonCurve::cyclically_shifted(std::size_t shift) const {
    auto out = vertices_;
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(shift % out.size()), out.end());
    return PolygonCurve(std::move(out));
}

CurveGeometry analyze(const PolygonCurve& c) {
    const std::size_t n = c.size();
    CurveGeometry g;
    g.edges.resize(n);
    g.edge_lengths.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.edges[i] = c[next(i, n)] - c[i];
        g.edge_lengths[i] = norm(g.edges[i]);
    }
    g.length = std::accumulate(g.edge_lengths.begin(), g.edge_lengths.end(), 0.0);
    const double threshold = kDegenerateEdgeFraction * g.length;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(g.edge_lengths[i] > threshold)) {
            throw CurveError(ErrorCode::DegenerateCurve,
                             "edge " + std::to_string(i) + " has length " +
                                 std::to_string(g.edge_lengths[i]));
        }
    }

    g.weights.resize(n);
    g.turning_angles.resize(n);
    g.curvature.resize(n);
    g.tangents.resize(n);
    g.normals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = prev(i, n);
        const Vec2& ein = g.edges[p];
        const Vec2& eout = g.edges[i];
        g.weights[i] = 0.5 * (g.edge_lengths[p] + g.edge_lengths[i]);
        g.turning_angles[i] = std::atan2(cross(ein, eout), dot(ein, eout));
        g.curvature[i] = g.turning_angles[i] / g.weights[i];
        Vec2 t = ein / g.edge_lengths[p] + eout / g.edge_lengths[i];
        const double tn = norm(t);
        if (!(tn > 1e-14)) {
            // A full reversal at a vertex leaves no bisector direction.
            throw CurveError(ErrorCode::DegenerateCurve, "cusp at vertex " + std::to_string(i));
        }
        g.tangents[i] = t / tn;
        g.normals[i] = perp(g.tangents[i]);
    }
    return g;
}

std::vector<double> edge_lengths(const PolygonCurve& c) { return analyze(c).edge_lengths; }

double total_length(const PolygonCurve& c) { return analyze(c).length; }

std::vector<double> vertex_curvature(const PolygonCurve& c) { return analyze(c).curvature; }

std::vector<Vec2> vertex_normals(const PolygonCurve& c) { return analyze(c).normals; }

namespace {

// Walks forward along the closed polygon (laps allowed) from a point at
// parameter (segment, u) and returns the first point at Euclidean distance
// `chord` from the start. `arc` accumulates the polygon arc length travelled.
struct Walker {
    const PolygonCurve& curve;
    const std::vector<double>& lengths;
    std::size_t segment = 0;  // unbounded; taken mod n
    double u = 0.0;
    double arc = 0.0;

    Vec2 position() const {
        const std::size_t n = curve.size();
        const Vec2& a = curve[segment % n];
        const Vec2& b = curve[(segment + 1) % n];
        return a + u * (b - a);
    }

    void advance(double chord, std::size_t max_segment) {
        const std::size_t n = curve.size();
        const Vec2 p = position();
        while (segment < max_segment) {
            const Vec2& a = curve[segment % n];
            const Vec2 d = curve[(segment + 1) % n] - a;
            const Vec2 ap = a - p;
            const double qa = norm2(d);
            const double qb = 2.0 * dot(ap, d);
            const double qc = norm2(ap) - chord * chord;
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                const double root = (-qb + std::sqrt(disc)) / (2.0 * qa);
                if (root >= u && root <= 1.0) {
                    arc += (root - u) * lengths[segment % n];
                    u = root;
                    return;
                }
            }
            arc += (1.0 - u) * lengths[segment % n];
            ++segment;
            u = 0.0;
        }
    }
};

}  // namespace

PolygonCurve resample_constant_speed(const PolygonCurve& c, std::size_t m) {
    if (m < 3) {
        throw CurveError(ErrorCode::InvalidInput, "resampling needs at least 3 vertices");
    }
    const CurveGeometry g = analyze(c);
    const std::size_t n = c.size();

    // Arc length reached after m equal chords; increasing in the chord.
    auto arc_after = [&](double chord) {
        Walker w{c, g.edge_lengths};
        for (std::size_t k = 0; k < m; ++k) w.advance(chord, 3 * n);
        return w.arc;
    };

    double lo = 0.0;
    double hi = g.length / static_cast<double>(m);
    if (arc_after(hi) < g.length) {
        // Only possible through round-off when every chord equals its arc.
        hi *= 1.0 + 1e-12;
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-16 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (arc_after(mid) < g.length) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double chord = 0.5 * (lo + hi);

    std::vector<Vec2> out;
    out.reserve(m);
    out.push_back(c[0]);
    Walker w{c, g.edge_lengths};
    for (std::size_t k = 1; k < m; ++k) {
        w.advance(chord, 3 * n);
        out.push_back(w.position());
    }
    return PolygonCurve(std::move(out));
}

std::vector<double> curvature_differential(const PolygonCurve& c, const VectorField& h) {
    const std::size_t n = c.size();
    require_same_size(n, h.values.size(), "curvature_differential");
    const CurveGeometry g = analyze(c);

    // Edge perturbations de_i = h_{i+1} - h_i and their induced changes of
    // edge direction angle and edge length.
    std::vector<double> dangle(n);
    std::vector<double> dlen(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 de = h.values[next(i, n)] - h.values[i];
        const double len = g.edge_lengths[i];
        dangle[i] = cross(g.edges[i], de) / (len * len);
        dlen[i] = dot(g.edges[i], de) / len;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = prev(i, n);
        const double dturn = dangle[i] - dangle[p];
        const double dweight = 0.5 * (dlen[p] + dlen[i]);
        out[i] = dturn / g.weights[i] - g.turning_angles[i] * dweight / (g.weights[i] * g.weights[i]);
    }
    return out;
}

std::vector<double> curvature_differential_formula(const PolygonCurve& c, const VectorField& h) {
    const std::size_t n = c.size();
    require_same_size(n, h.values.size(), "curvature_differential_formula");
    const CurveGeometry g = analyze(c);

    std::vector<double> ht(n);
    std::vector<double> hn(n);
    for (std::size_t i = 0; i < n; ++i) {
        ht[i] = dot(h.values[i], g.tangents[i]);
        hn[i] = dot(h.values[i], g.normals[i]);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t p = prev(i, n);
        const std::size_t q = next(i, n);
        const double lp = g.edge_lengths[p];
        const double lq = g.edge_lengths[i];
        const double kappa_s = (g.curvature[q] - g.curvature[p]) / (lp + lq);
        const double hn_ss = 2.0 * ((hn[q] - hn[i]) / lq - (hn[i] - hn[p]) / lp) / (lp + lq);
        out[i] = ht[i] * kappa_s + hn[i] * g.curvature[i] * g.curvature[i] + hn_ss;
    }
    return out;
}

std::vector<double> periodic_d1(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (f[next(i, n)] - f[prev(i, n)]) / (2.0 * h);
    }
    return out;
}

std::vector<double> periodic_d2(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (f[next(i, n)] - 2.0 * f[i] + f[prev(i, n)]) / (h * h);
    }
    return out;
}

PolygonCurve resample_smooth(const PolygonCurve& c, std::size_t m) {
    const std::size_t n = c.size();
    if (m < 3) throw CurveError(ErrorCode::InvalidInput, "need at least 3 vertices");
    // Coefficients of z = x + i y for the frequencies -n/2 .. n/2; with even
    // n the Nyquist term is split between +n/2 and -n/2.
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    std::vector<std::complex<double>> coef(2 * static_cast<std::size_t>(half) + 1);
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(i) /
                               static_cast<double>(n);
            sum += std::complex<double>(c[i].x, c[i].y) * std::polar(1.0, ang);
        }
        sum /= static_cast<double>(n);
        if (n % 2 == 0 && (k == half || k == -half)) sum *= 0.5;
        coef[static_cast<std::size_t>(k + half)] = sum;
    }
    const std::size_t fine = 16 * m;
    std::vector<Vec2> pts(fine);
    for (std::size_t q = 0; q < fine; ++q) {
        const double u = static_cast<double>(q) / static_cast<double>(fine);
        std::complex<double> z = 0.0;
        for (std::ptrdiff_t k = -half; k <= half; ++k) {
            z += coef[static_cast<std::size_t>(k + half)] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) * u);
        }
        pts[q] = {z.real(), z.imag()};
    }
    pts[0] = c[0];
    return resample_constant_speed(PolygonCurve(std::move(pts)), m);
}

}  // namespace curveflow
