#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "curveflow/bvp.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/io.hpp"
#include "curveflow/shapes.hpp"
#include "curveflow/svg.hpp"

using namespace curveflow;
namespace fs = std::filesystem;

namespace {

CurvePath wobbly_path(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    std::vector<PolygonCurve> slices;
    for (int j = 0; j < 4; ++j) {
        std::vector<Vec2> pts;
        const auto base = make_circle(12, 1.0 + 0.3 * j);
        for (const Vec2& p : base.vertices()) pts.push_back(p + Vec2{u(rng), u(rng)});
        slices.emplace_back(std::move(pts));
    }
    return CurvePath(std::move(slices));
}

// Scratch directory removed at scope exit.
struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("curveflow_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const Scratch& s) {
    const std::string cmd = std::string("\"") + CURVEFLOW_CLI + "\" " + args + " > \"" + s.file("stdout") +
                            "\" 2> \"" + s.file("stderr") + "\"";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("format_double round-trips every double it prints") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> bits;
    int tested = 0;
    while (tested < 2000) {
        const std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isnormal(v)) continue;
        CHECK(std::stod(format_double(v)) == v);
        ++tested;
    }
    CHECK(std::stod(format_double(0.1)) == 0.1);
    CHECK(std::stod(format_double(-0.0)) == 0.0);
}

TEST_CASE("curve JSON round-trip is bit-exact") {
    std::mt19937 rng(1);
    const auto p = wobbly_path(rng);
    const PolygonCurve& c = p[2];
    const Json j = Json::parse(dump_json(curve_to_json(c)));
    CHECK(curve_from_json(j) == c);
}

TEST_CASE("path JSON round-trip keeps parameters and every slice") {
    std::mt19937 rng(2);
    const auto p = wobbly_path(rng);
    const MetricParams params{0.37, 0.05};
    const StoredPath back = path_from_json(Json::parse(dump_json(path_to_json(params, p))));
    CHECK(back.params.A == params.A);
    CHECK(back.params.epsilon == params.epsilon);
    REQUIRE(back.path.time_samples() == p.time_samples());
    for (std::size_t t = 0; t < p.time_samples(); ++t) CHECK(back.path[t] == p[t]);
}

TEST_CASE("report JSON carries the numbers unchanged") {
    std::mt19937 rng(3);
    const auto p = wobbly_path(rng);
    const GeodesicReport r = make_report(MetricParams{0.2, 0.0}, p);
    const Json j = Json::parse(dump_json(report_to_json(r)));
    CHECK(j.at("energy").get<double>() == r.energy);
    CHECK(j.at("path_length").get<double>() == r.path_length);
    CHECK(j.at("area_swept").get<double>() == r.area_swept);
    CHECK(j.at("graph_area_bound").get<double>() == r.graph_area_bound);
    CHECK(j.at("certificates_passed").get<bool>() == r.certificates_passed);
}

TEST_CASE("malformed curve JSON is an input error") {
    CHECK_THROWS_AS(curve_from_json(Json::parse(R"({"points": [[0,0],[1,0]]})")), InputError);
    CHECK_THROWS_AS(curve_from_json(Json::parse(R"({"points": [[0,0],[1,0],[0,"x"]]})")), InputError);
    CHECK_THROWS_AS(curve_from_json(Json::parse(R"({"pts": []})")), InputError);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(curve_from_json(Json{{"points", {{0.0, 0.0}, {1.0, 0.0}, {0.0, nan}}}}), InputError);
    CHECK_THROWS_AS(normal_field_from_json(Json::parse(R"({"values": "no"})")), InputError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/curve.json"), InputError);
}

TEST_CASE("SVG output is deterministic and depends on the input") {
    std::mt19937 rng(4);
    const auto p = wobbly_path(rng);
    const std::string a = path_svg(p);
    CHECK(a == path_svg(p));
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    std::mt19937 rng2(5);
    CHECK(path_svg(wobbly_path(rng2)) != a);
    CHECK(triangle_svg({p, p, p}) == triangle_svg({p, p, p}));
}

TEST_CASE("energy density CSV has one row per time step") {
    std::mt19937 rng(6);
    const auto p = wobbly_path(rng);
    const std::string csv = energy_density_csv(MetricParams{0.1, 0.0}, p);
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line == "t,energy_density,speed");
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(p.time_samples() - 1));
}

TEST_CASE("cli: geodesic output validates and is reproducible") {
    Scratch s;
    write_text_file(s.file("c1.json"), dump_json(curve_to_json(make_circle(24, 1.0))));
    write_text_file(s.file("c2.json"), dump_json(curve_to_json(make_circle(24, 1.5))));
    const std::string args = "geodesic --a 0.1 --time-samples 6 --vertices 24 \"" + s.file("c1.json") + "\" \"" +
                             s.file("c2.json") + "\" -o \"" + s.file("p.json") + "\" --svg \"" + s.file("p.svg") +
                             "\" --energy-csv \"" + s.file("e.csv") + "\"";
    REQUIRE(run_cli(args, s) == 0);
    const std::string first = slurp(s.file("p.json"));
    const std::string svg = slurp(s.file("p.svg"));
    const Json report = Json::parse(slurp(s.file("stdout")));
    CHECK(report.at("certificates_passed").get<bool>());
    CHECK(Json::parse(first).at("curves").size() == 6);

    REQUIRE(run_cli(args, s) == 0);
    CHECK(slurp(s.file("p.json")) == first);
    CHECK(slurp(s.file("p.svg")) == svg);

    CHECK(run_cli("validate \"" + s.file("p.json") + "\"", s) == 0);
    CHECK(Json::parse(slurp(s.file("stdout"))).at("passed").get<bool>());
}

TEST_CASE("cli: exit codes") {
    Scratch s;
    write_text_file(s.file("bad.json"), "{\"points\": [[0, 0], [1, 0]");
    write_text_file(s.file("c.json"), dump_json(curve_to_json(make_circle(16, 1.0))));
    write_text_file(s.file("v.json"), R"({"values": [1, 2, 3]})");

    SUBCASE("malformed JSON is 2") {
        CHECK(run_cli("geodesic --a 0.1 \"" + s.file("bad.json") + "\" \"" + s.file("c.json") + "\" -o \"" +
                          s.file("o.json") + "\"",
                      s) == 2);
        CHECK(Json::parse(slurp(s.file("stderr"))).at("error") == "InputError");
    }
    SUBCASE("usage errors are 2") {
        CHECK(run_cli("no-such-command", s) == 2);
        CHECK(run_cli("jacobi", s) == 2);
    }
    SUBCASE("module errors are 1 with the error code on stderr") {
        CHECK(run_cli("shoot --a0 \"" + s.file("c.json") + "\" \"" + s.file("v.json") + "\" -o \"" + s.file("o.json") +
                          "\"",
                      s) == 1);
        CHECK(Json::parse(slurp(s.file("stderr"))).at("error") == "SizeMismatch");
        CHECK(run_cli("cigar --a 0", s) == 1);
        CHECK(Json::parse(slurp(s.file("stderr"))).at("error") == "RequiresPositiveA");
    }
    SUBCASE("small commands succeed") {
        CHECK(run_cli("circles --a 1 --r0 1 --v0 -1 --t-end 0.5 --samples 11", s) == 0);
        CHECK(run_cli("cigar --a 0.25 --segment 1 --n 64", s) == 0);
        CHECK(run_cli("jacobi --a 1 --n 3 --r-max 30 --dr 0.5 -o \"" + s.file("j.csv") + "\"", s) == 0);
        CHECK(Json::parse(slurp(s.file("stdout"))).at("zeros").size() >= 1);
    }
}
