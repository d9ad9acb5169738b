#include "curveflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace curveflow {

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    // Avoid "-0.000".
    if (std::string(buf) == "-0.000") return "0.000";
    return buf;
}

Vec2 centroid(const PolygonCurve& c) {
    Vec2 s;
    for (const auto& v : c.vertices()) s += v;
    return s / static_cast<double>(c.size());
}

}  // namespace

std::string render_svg(const std::vector<SvgStroke>& strokes, double width, double height) {
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = xmin;
    double xmax = -xmin;
    double ymax = -xmin;
    for (const auto& s : strokes) {
        for (const auto& p : s.points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    if (!std::isfinite(xmin)) xmin = ymin = 0.0, xmax = ymax = 1.0;
    const double margin = 10.0;
    const double sx = (width - 2 * margin) / std::max(xmax - xmin, 1e-12);
    const double sy = (height - 2 * margin) / std::max(ymax - ymin, 1e-12);
    const double scale = std::min(sx, sy);
    const double ox = margin + 0.5 * (width - 2 * margin - scale * (xmax - xmin));
    const double oy = margin + 0.5 * (height - 2 * margin - scale * (ymax - ymin));

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\"" << fixed(height)
       << "\" viewBox=\"0 0 " << fixed(width) << ' ' << fixed(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& s : strokes) {
        if (s.points.empty()) continue;
        os << (s.closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << s.color
           << "\" stroke-width=\"" << fixed(s.width) << "\" points=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            const double x = ox + scale * (s.points[i].x - xmin);
            const double y = height - (oy + scale * (s.points[i].y - ymin));
            os << (i ? " " : "") << fixed(x) << ',' << fixed(y);
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string path_svg(const CurvePath& path) {
    std::vector<SvgStroke> strokes;
    const std::size_t T = path.time_samples();
    const std::size_t mid = T / 2;
    for (std::size_t j = 0; j < T; ++j) {
        if (j == mid) continue;
        SvgStroke s;
        s.points.assign(path[j].vertices().begin(), path[j].vertices().end());
        if (j == 0 || j + 1 == T) {
            s.color = "#1f4fbf";
            s.width = 1.5;
        } else {
            s.color = "#9a9a9a";
            s.width = 0.8;
        }
        strokes.push_back(std::move(s));
    }
    SvgStroke m;
    m.points.assign(path[mid].vertices().begin(), path[mid].vertices().end());
    m.color = "#d62728";
    m.width = 2.5;
    strokes.push_back(std::move(m));
    return render_svg(strokes);
}

std::string triangle_svg(const std::vector<CurvePath>& sides, std::size_t shapes_per_side) {
    const Vec2 corner[3] = {{0.0, 0.0}, {10.0, 0.0}, {5.0, 5.0 * std::sqrt(3.0)}};
    std::vector<SvgStroke> strokes;
    for (std::size_t k = 0; k < sides.size() && k < 3; ++k) {
        const CurvePath& p = sides[k];
        const Vec2 a = corner[k];
        const Vec2 b = corner[(k + 1) % 3];
        SvgStroke edge;
        edge.points = {a, b};
        edge.closed = false;
        edge.color = "#dddddd";
        edge.width = 0.5;
        strokes.push_back(edge);
        const std::size_t count = std::max<std::size_t>(2, shapes_per_side);
        for (std::size_t s = 0; s < count; ++s) {
            const double u = static_cast<double>(s) / static_cast<double>(count - 1);
            const auto j = static_cast<std::size_t>(std::lround(u * static_cast<double>(p.time_samples() - 1)));
            const PolygonCurve& c = p[j];
            const Vec2 ctr = centroid(c);
            const Vec2 at = (1.0 - u) * a + u * b;
            SvgStroke shape;
            for (const auto& v : c.vertices()) shape.points.push_back(at + 0.6 * (v - ctr));
            shape.color = (s == 0 || s + 1 == count) ? "#1f4fbf" : "#444444";
            shape.width = 1.0;
            strokes.push_back(std::move(shape));
        }
    }
    return render_svg(strokes, 640.0, 600.0);
}

}  // namespace curveflow
