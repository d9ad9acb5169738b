// curveflow: command-line front end for the G^A curve-space library.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curveflow/bvp.hpp"
#include "curveflow/curvature.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/experiments.hpp"
#include "curveflow/io.hpp"
#include "curveflow/ivp.hpp"
#include "curveflow/metric.hpp"
#include "curveflow/special.hpp"
#include "curveflow/svg.hpp"

using namespace curveflow;

namespace {

struct SolverFlags {
    double A = 0.0;
    double eps = SolverConfig{}.epsilon;
    std::size_t time_samples = SolverConfig{}.time_samples;
    std::size_t vertices = SolverConfig{}.vertices;
    double tol = SolverConfig{}.gradient_tolerance;
    int max_iters = SolverConfig{}.max_iterations;

    void add(CLI::App* app) {
        app->add_option("--a", A, "curvature weight A >= 0")->required();
        app->add_option("--eps", eps, "tangential penalty weight");
        app->add_option("--time-samples", time_samples, "slices T including both ends");
        app->add_option("--vertices", vertices, "vertices per slice");
        app->add_option("--tol", tol, "absolute gradient tolerance (infinity norm)");
        app->add_option("--max-iters", max_iters, "optimizer iteration cap");
    }

    SolverConfig config() const {
        SolverConfig c;
        c.epsilon = eps;
        c.time_samples = time_samples;
        c.vertices = vertices;
        c.gradient_tolerance = tol;
        c.max_iterations = max_iters;
        c.validate();
        return c;
    }

    MetricParams params() const {
        MetricParams p{A, eps};
        p.validate();
        return p;
    }
};

// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

Json error_json(const std::string& code, const std::string& message) {
    return Json{{"error", code}, {"message", message}};
}

Json solution_json(const GeodesicSolution& s) {
    Json j = path_to_json(MetricParams{}, s.path);
    j.erase("A");
    j.erase("epsilon");
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geodesics, curvature and special solutions for closed plane curves under G^A"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "recorded in JSON outputs; no command draws random numbers");

    // geodesic
    auto* geo = app.add_subcommand("geodesic", "boundary-value geodesic by discrete energy minimization");
    SolverFlags geo_flags;
    geo_flags.add(geo);
    std::string geo_start, geo_end, geo_out, geo_svg, geo_csv;
    geo->add_option("start", geo_start, "start curve JSON")->required();
    geo->add_option("end", geo_end, "end curve JSON")->required();
    geo->add_option("-o", geo_out, "path JSON output")->required();
    geo->add_option("--svg", geo_svg, "SVG of all slices");
    geo->add_option("--energy-csv", geo_csv, "per-step energy density CSV");

    // shoot
    auto* shoot = app.add_subcommand("shoot", "A = 0 initial-value geodesic");
    bool shoot_a0 = false;
    double shoot_dt = 1e-3, shoot_t_end = 0.1;
    std::optional<double> shoot_ceiling;
    std::size_t shoot_every = 1;
    std::string shoot_curve, shoot_vel, shoot_out, shoot_svg;
    shoot->add_flag("--a0", shoot_a0, "required: the forward integrator is for A = 0")->required();
    shoot->add_option("--dt", shoot_dt, "macro time step");
    shoot->add_option("--t-end", shoot_t_end, "final time");
    shoot->add_option("--ceiling", shoot_ceiling, "curvature blow-up ceiling (default 1e3 / length)");
    shoot->add_option("--record-every", shoot_every, "keep every k-th step");
    shoot->add_option("curve", shoot_curve, "initial curve JSON")->required();
    shoot->add_option("velocity", shoot_vel, "normal velocity JSON {\"values\": [...]}")->required();
    shoot->add_option("-o", shoot_out, "trajectory JSON output")->required();
    shoot->add_option("--svg", shoot_svg, "SVG of the retained slices");

    // curvature
    auto* curv = app.add_subcommand("curvature", "sectional curvature at a constant-speed curve");
    double curv_A = 0.0;
    std::string curv_frame, curv_m, curv_h;
    curv->add_option("--a", curv_A, "curvature weight")->required();
    curv->add_option("frame", curv_frame, "base curve JSON (constant edge length)")->required();
    curv->add_option("m_field", curv_m, "first normal field JSON")->required();
    curv->add_option("h_field", curv_h, "second normal field JSON")->required();

    // jacobi
    auto* jac = app.add_subcommand("jacobi", "Jacobi field along the concentric circles");
    double jac_A = 1.0, jac_rmax = 30.0, jac_dr = 0.01;
    int jac_n = 3;
    std::string jac_out;
    jac->add_option("--a", jac_A, "curvature weight A > 0")->required();
    jac->add_option("--n", jac_n, "frequency n >= 1");
    jac->add_option("--r-max", jac_rmax, "largest radius");
    jac->add_option("--dr", jac_dr, "sampling step in r");
    jac->add_option("-o", jac_out, "CSV output (r,a_n); stdout when omitted");

    // circles
    auto* circ = app.add_subcommand("circles", "radius of the concentric-circle geodesic");
    double circ_A = 0.0, circ_r0 = 1.0, circ_v0 = -1.0, circ_t_end = 1.0;
    std::size_t circ_samples = 101;
    std::string circ_out;
    circ->add_option("--a", circ_A, "curvature weight")->required();
    circ->add_option("--r0", circ_r0, "initial radius");
    circ->add_option("--v0", circ_v0, "initial dr/dt");
    circ->add_option("--t-end", circ_t_end, "final time");
    circ->add_option("--samples", circ_samples, "uniform output samples");
    circ->add_option("-o", circ_out, "CSV output; stdout when omitted");

    // cigar
    auto* cig = app.add_subcommand("cigar", "cigar curve and its ODE residual");
    double cig_A = 0.1, cig_segment = 2.0;
    std::size_t cig_n = 200;
    std::string cig_out, cig_svg;
    cig->add_option("--a", cig_A, "curvature weight A > 0")->required();
    cig->add_option("--segment", cig_segment, "length of the straight segments");
    cig->add_option("--n", cig_n, "vertices");
    cig->add_option("-o", cig_out, "curve JSON output");
    cig->add_option("--svg", cig_svg, "SVG of the curve");

    // zigzag
    auto* zz = app.add_subcommand("zigzag", "zigzag reparametrizations of a horizontal path");
    double zz_A = 0.25;
    std::vector<int> zz_teeth{4, 8, 16, 32};
    std::size_t zz_vertices = 0, zz_time = 0;
    std::string zz_start, zz_end, zz_out;
    zz->add_option("--a", zz_A, "curvature weight for the G^A column")->required();
    zz->add_option("--teeth", zz_teeth, "tooth counts")->expected(1, -1);
    zz->add_option("--vertices", zz_vertices, "vertices (default 64 per tooth, at least 256)");
    zz->add_option("--time-samples", zz_time, "time samples (default 8 per tooth + 1, at least 257)");
    zz->add_option("start", zz_start, "start curve JSON")->required();
    zz->add_option("end", zz_end, "end curve JSON")->required();
    zz->add_option("-o", zz_out, "CSV output; stdout when omitted");

    // validate
    auto* val = app.add_subcommand("validate", "re-check the bound certificates of a stored path");
    std::optional<double> val_A;
    std::string val_path;
    val->add_option("path", val_path, "path JSON")->required();
    val->add_option("--a", val_A, "curvature weight (default: the stored A)");

    // triangle
    auto* tri = app.add_subcommand("triangle", "geodesic triangle between three rotated ellipses");
    SolverFlags tri_flags;
    tri_flags.add(tri);
    std::string tri_out, tri_svg;
    tri->add_option("-o", tri_out, "JSON with the three sides");
    tri->add_option("--svg", tri_svg, "triangle layout SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << dump_json(error_json("UsageError", e.what()));
        return 2;
    }

    try {
        if (*geo) {
            const SolverConfig config = geo_flags.config();
            const MetricParams params = geo_flags.params();
            const PolygonCurve start = curve_from_json(read_json_file(geo_start));
            const PolygonCurve end = curve_from_json(read_json_file(geo_end));
            const GeodesicSolution sol = solve_geodesic(params, config, start, end);
            Json out = path_to_json(params, sol.path);
            out["report"] = report_to_json(sol.report);
            out["seed"] = seed;
            write_text_file(geo_out, dump_json(out));
            if (!geo_svg.empty()) write_text_file(geo_svg, path_svg(sol.path));
            if (!geo_csv.empty()) write_text_file(geo_csv, energy_density_csv(params, sol.path));
            std::cout << dump_json(report_to_json(sol.report));
        } else if (*shoot) {
            const PolygonCurve c0 = curve_from_json(read_json_file(shoot_curve));
            const NormalField v = normal_field_from_json(read_json_file(shoot_vel));
            ShootOptions opts;
            opts.ceiling = shoot_ceiling;
            opts.record_every = shoot_every;
            const Trajectory traj = integrate_a0(c0, v, shoot_t_end, shoot_dt, opts);
            Json curves = Json::array();
            Json times = Json::array();
            for (const auto& st : traj.states) {
                curves.push_back(curve_to_json(st.positions)["points"]);
                times.push_back(st.t);
            }
            Json out{{"A", 0.0},
                     {"epsilon", 0.0},
                     {"curves", curves},
                     {"times", times},
                     {"blowup", traj.blowup},
                     {"blowup_time", traj.blowup_time},
                     {"conservation_error", traj.conservation_error},
                     {"position_curvature_drift", traj.position_curvature_drift},
                     {"seed", seed}};
            write_text_file(shoot_out, dump_json(out));
            if (!shoot_svg.empty() && traj.states.size() >= 2) write_text_file(shoot_svg, path_svg(traj.as_path()));
            Json summary{{"states", traj.states.size()},
                         {"t", traj.states.back().t},
                         {"blowup", traj.blowup},
                         {"blowup_time", traj.blowup_time},
                         {"conservation_error", traj.conservation_error},
                         {"position_curvature_drift", traj.position_curvature_drift}};
            std::cout << dump_json(summary);
        } else if (*curv) {
            const MetricParams params{curv_A, 0.0};
            params.validate();
            const ChartFrame frame(curve_from_json(read_json_file(curv_frame)));
            const auto m = scalars_from_json(read_json_file(curv_m));
            const auto h = scalars_from_json(read_json_file(curv_h));
            const double R = curv_A > 0.0 ? curvature_tensor_value(params, frame, m, h)
                                          : curvature_tensor_value_a0(frame, m, h);
            const double K = sectional_curvature(params, frame, m, h);
            std::cout << dump_json(Json{{"A", curv_A}, {"curvature_tensor", R}, {"sectional_curvature", K}});
        } else if (*jac) {
            const MetricParams params{jac_A, 0.0};
            const double sqrtA = std::sqrt(std::max(jac_A, 0.0));
            const JacobiSolution sol =
                jacobi_field_on_circles(params, jac_n, {jac_dr, jac_rmax}, jac_dr);
            std::ostringstream csv;
            csv << "r,a_n\n";
            for (std::size_t i = 0; i < sol.r.size(); ++i) {
                csv << format_double(sol.r[i]) << ',' << format_double(sol.a[i]) << '\n';
            }
            Json zeros = Json::array();
            Json scaled = Json::array();
            for (double z : sol.zeros) {
                zeros.push_back(z);
                scaled.push_back(z / sqrtA);
            }
            if (jac_out.empty()) {
                std::cout << csv.str();
                for (double z : sol.zeros) std::cout << "# zero," << format_double(z) << '\n';
            } else {
                write_text_file(jac_out, csv.str());
                std::cout << dump_json(Json{{"A", jac_A}, {"n", jac_n}, {"zeros", zeros}, {"zeros_over_sqrt_A", scaled}});
            }
        } else if (*circ) {
            const MetricParams params{circ_A, 0.0};
            const CircleGeodesic g = circle_geodesic(params, circ_r0, circ_v0, circ_t_end, circ_samples);
            std::ostringstream csv;
            csv << "t,r,r_t,energy_density,local_exponent\n";
            for (const auto& s : g.grid) {
                csv << format_double(s.t) << ',' << format_double(s.r) << ',' << format_double(s.r_t) << ','
                    << format_double(circle_energy_density(params, s.r, s.r_t)) << ','
                    << format_double(circle_local_exponent(params, s.r, s.r_t)) << '\n';
            }
            emit(circ_out, csv.str());
            if (!circ_out.empty()) {
                std::cout << dump_json(Json{{"collapsed", g.collapsed}, {"collapse_time", g.collapse_time}});
            }
        } else if (*cig) {
            const MetricParams params{cig_A, 0.0};
            const PolygonCurve c = cigar_curve(params, cig_segment, cig_n);
            Json out = curve_to_json(c);
            out["A"] = cig_A;
            out["segment"] = cig_segment;
            out["width"] = 2.0 * std::sqrt(cig_A);
            out["curvature"] = vertex_curvature(c);
            if (cig_out.empty()) {
                std::cout << dump_json(out);
            } else {
                write_text_file(cig_out, dump_json(out));
            }
            if (!cig_svg.empty()) {
                SvgStroke s;
                s.points.assign(c.vertices().begin(), c.vertices().end());
                s.color = "#d62728";
                s.width = 2.0;
                write_text_file(cig_svg, render_svg({s}));
            }
        } else if (*zz) {
            const MetricParams params{zz_A, 0.0};
            params.validate();
            const PolygonCurve c0 = curve_from_json(read_json_file(zz_start));
            const PolygonCurve c1 = curve_from_json(read_json_file(zz_end));
            std::ostringstream csv;
            csv << "teeth,L_G0,L_GA\n";
            for (int teeth : zz_teeth) {
                const CurvePath p = zigzag_path(c0, c1, teeth, ZigzagGrid{zz_vertices, zz_time});
                csv << teeth << ',' << format_double(horizontal_path_length(MetricParams{}, p)) << ','
                    << format_double(horizontal_path_length(params, p)) << '\n';
            }
            emit(zz_out, csv.str());
        } else if (*val) {
            StoredPath sp = path_from_json(read_json_file(val_path));
            if (val_A) sp.params.A = *val_A;
            sp.params.validate();
            const auto checks = check_certificates(sp.params, sp.path);
            bool ok = true;
            for (const auto& c : checks) ok = ok && c.passed;
            std::cout << dump_json(Json{{"A", sp.params.A}, {"certificates", certificates_to_json(checks)}, {"passed", ok}});
            return ok ? 0 : 1;
        } else if (*tri) {
            const SolverConfig config = tri_flags.config();
            const MetricParams params = tri_flags.params();
            const TriangleResult r = run_triangle(params, config);
            Json sides = Json::array();
            std::vector<CurvePath> paths;
            for (const auto& s : r.sides) {
                Json side = solution_json(s);
                side["report"] = report_to_json(s.report);
                sides.push_back(std::move(side));
                paths.push_back(s.path);
            }
            Json summary{{"A", params.A},
                         {"angles_deg", r.angles_deg},
                         {"angle_sum_deg", r.angle_sum_deg},
                         {"converged", r.sides[0].report.converged && r.sides[1].report.converged &&
                                           r.sides[2].report.converged}};
            if (!tri_out.empty()) {
                Json out = summary;
                out["epsilon"] = params.epsilon;
                out["sides"] = std::move(sides);
                out["seed"] = seed;
                write_text_file(tri_out, dump_json(out));
            }
            if (!tri_svg.empty()) write_text_file(tri_svg, triangle_svg(paths));
            std::cout << dump_json(summary);
        }
    } catch (const CurveError& e) {
        std::cerr << dump_json(error_json(std::string(to_string(e.code())), e.what()));
        return 1;
    } catch (const InputError& e) {
        std::cerr << dump_json(error_json("InputError", e.what()));
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << dump_json(error_json("InputError", e.what()));
        return 2;
    }
    return 0;
}
