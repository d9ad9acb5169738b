#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curveflow/bvp.hpp"
#include "curveflow/curve.hpp"
#include "curveflow/metric.hpp"

namespace curveflow {

/// Malformed or unreadable input file (the CLI exits with code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

/// {"points": [[x, y], ...]}; rejects n < 3 and non-finite coordinates.
PolygonCurve curve_from_json(const Json& j);
Json curve_to_json(const PolygonCurve& c);

struct StoredPath {
    MetricParams params;
    CurvePath path;
};

/// {"A": a, "epsilon": e, "curves": [[[x, y], ...], ...]}
StoredPath path_from_json(const Json& j);
Json path_to_json(const MetricParams& params, const CurvePath& path);

/// {"values": [...]}
NormalField normal_field_from_json(const Json& j);
std::vector<double> scalars_from_json(const Json& j);

Json report_to_json(const GeodesicReport& r);
Json certificates_to_json(const std::vector<CertificateCheck>& checks);

Json read_json_file(const std::string& path);
/// Pretty-printed; doubles keep 17 significant digits.
void write_text_file(const std::string& path, const std::string& text);
std::string dump_json(const Json& j);

/// "t,energy_density,speed" per forward time step (geometry of the earlier slice).
std::string energy_density_csv(const MetricParams& params, const CurvePath& path);

/// Shortest decimal that round-trips ("%.17g").
std::string format_double(double v);

}  // namespace curveflow
