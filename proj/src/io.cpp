#include "curveflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "curveflow/errors.hpp"

namespace curveflow {

namespace {

Vec2 point_from_json(const Json& p) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw InputError("a point must be [x, y]");
    }
    const Vec2 v{p[0].get<double>(), p[1].get<double>()};
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InputError("non-finite coordinate");
    return v;
}

PolygonCurve curve_from_points(const Json& pts) {
    if (!pts.is_array()) throw InputError("points must be an array");
    if (pts.size() < 3) throw InputError("a closed curve needs at least 3 points");
    std::vector<Vec2> v;
    v.reserve(pts.size());
    for (const auto& p : pts) v.push_back(point_from_json(p));
    return PolygonCurve(std::move(v));
}

Json points_to_json(const PolygonCurve& c) {
    Json pts = Json::array();
    for (const auto& v : c.vertices()) pts.push_back({v.x, v.y});
    return pts;
}

double number_or(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw InputError(std::string(key) + " must be a number");
    return j[key].get<double>();
}

}  // namespace

PolygonCurve curve_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("points")) throw InputError("curve JSON needs \"points\"");
    return curve_from_points(j["points"]);
}

Json curve_to_json(const PolygonCurve& c) { return Json{{"points", points_to_json(c)}}; }

StoredPath path_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("curves") || !j["curves"].is_array()) {
        throw InputError("path JSON needs \"curves\"");
    }
    MetricParams params{number_or(j, "A", 0.0), number_or(j, "epsilon", 0.0)};
    if (!(params.A >= 0.0) || !(params.epsilon >= 0.0)) throw InputError("A and epsilon must be >= 0");
    std::vector<PolygonCurve> curves;
    for (const auto& c : j["curves"]) curves.push_back(curve_from_points(c));
    if (curves.size() < 2) throw InputError("a path needs at least 2 curves");
    for (const auto& c : curves) {
        if (c.size() != curves.front().size()) throw InputError("all curves of a path need the same vertex count");
    }
    return {params, CurvePath(std::move(curves))};
}

Json path_to_json(const MetricParams& params, const CurvePath& path) {
    Json curves = Json::array();
    for (const auto& c : path.curves()) curves.push_back(points_to_json(c));
    return Json{{"A", params.A}, {"epsilon", params.epsilon}, {"curves", std::move(curves)}};
}

std::vector<double> scalars_from_json(const Json& j) {
    const Json& arr = j.is_object() && j.contains("values") ? j["values"] : j;
    if (!arr.is_array()) throw InputError("expected {\"values\": [...]}");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw InputError("values must be numbers");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw InputError("non-finite value");
        out.push_back(d);
    }
    return out;
}

NormalField normal_field_from_json(const Json& j) { return NormalField{scalars_from_json(j)}; }

Json report_to_json(const GeodesicReport& r) {
    return Json{{"energy", r.energy},
                {"path_length", r.path_length},
                {"discrete_energy", r.discrete_energy},
                {"lipschitz_lhs", r.lipschitz_lhs},
                {"lipschitz_rhs", r.lipschitz_rhs},
                {"area_swept", r.area_swept},
                {"area_swept_bound", r.area_swept_bound},
                {"graph_area", r.graph_area},
                {"graph_area_bound", r.graph_area_bound},
                {"initial_gradient_norm", r.initial_gradient_norm},
                {"gradient_norm", r.gradient_norm},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"certificates_passed", r.certificates_passed}};
}

Json certificates_to_json(const std::vector<CertificateCheck>& checks) {
    Json out = Json::array();
    for (const auto& c : checks) out.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"passed", c.passed}});
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string energy_density_csv(const MetricParams& params, const CurvePath& path) {
    std::ostringstream os;
    os << "t,energy_density,speed\n";
    const auto terms = step_terms(params, path);
    for (std::size_t j = 0; j < terms.size(); ++j) {
        os << format_double(static_cast<double>(j) * path.time_step()) << ','
           << format_double(0.5 * terms[j].quadratic_form) << ','
           << format_double(std::sqrt(terms[j].quadratic_form)) << '\n';
    }
    return os.str();
}

}  // namespace curveflow
