#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "curveflow/bvp.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/experiments.hpp"
#include "curveflow/shapes.hpp"

using namespace curveflow;

namespace {

// Direct summation of the discrete energy, written out term by term with no
// shared code: vertices x[j][i], i cyclic, j in [0, T).
double energy_by_hand(const std::vector<std::vector<Vec2>>& x, double A, double eps) {
    const long T = static_cast<long>(x.size());
    const long n = static_cast<long>(x[0].size());
    auto at = [&](long i, long j) { return x[static_cast<std::size_t>(j)][static_cast<std::size_t>(((i % n) + n) % n)]; };
    double total = 0.0;
    for (long j = 0; j < T; ++j) {
        for (long i = 0; i < n; ++i) {
            const Vec2 xm = at(i - 1, j);
            const Vec2 x0 = at(i, j);
            const Vec2 xp = at(i + 1, j);
            const double lm = std::hypot(xm.x - x0.x, xm.y - x0.y);
            const double lp = std::hypot(x0.x - xp.x, x0.y - xp.y);
            const double sx = xm.x - 2.0 * x0.x + xp.x;
            const double sy = xm.y - 2.0 * x0.y + xp.y;
            const double k = 0.5 * (1.0 / std::pow(lm, 4) + 1.0 / std::pow(lp, 4)) * (sx * sx + sy * sy);
            for (long di : {-1L, 1L}) {
                for (long dj : {-1L, 1L}) {
                    if (j + dj < 0 || j + dj >= T) continue;
                    const Vec2 b = at(i + di, j);
                    const Vec2 c = at(i, j + dj);
                    const double ux = x0.x - b.x, uy = x0.y - b.y;
                    const double wx = x0.x - c.x, wy = x0.y - c.y;
                    // (wx, wy)^perp = (-wy, wx)
                    const double cr = ux * -wy + uy * wx;
                    const double dt = ux * wx + uy * wy;
                    total += (cr * cr + eps * dt * dt) / std::sqrt(ux * ux + uy * uy) * (1.0 + A * k);
                }
            }
        }
    }
    return total;
}

std::vector<std::vector<Vec2>> raw(const CurvePath& p) {
    std::vector<std::vector<Vec2>> out;
    for (const auto& c : p.curves()) out.emplace_back(c.vertices().begin(), c.vertices().end());
    return out;
}

CurvePath random_path(std::size_t T, std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-0.08, 0.08);
    std::vector<PolygonCurve> slices;
    for (std::size_t j = 0; j < T; ++j) {
        const auto base = make_ellipse(n, 1.0 + 0.2 * j, 0.6);
        std::vector<Vec2> pts(base.vertices().begin(), base.vertices().end());
        for (auto& p : pts) p += Vec2{u(rng), u(rng)};
        slices.emplace_back(pts);
    }
    return CurvePath(std::move(slices));
}

SolverConfig small_config() {
    SolverConfig cfg;
    cfg.time_samples = 8;
    cfg.vertices = 16;
    cfg.relative_tolerance = 0.0;
    cfg.gradient_tolerance = 1e-8;
    return cfg;
}

}  // namespace

TEST_CASE("SolverConfig validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.time_samples = 2;
    CHECK_THROWS_AS(c.validate(), CurveError);
    c = {};
    c.vertices = 7;
    CHECK_THROWS_AS(c.validate(), CurveError);
    c = {};
    c.gradient_tolerance = 0.0;
    CHECK_THROWS_AS(c.validate(), CurveError);
}

TEST_CASE("discrete energy of a static path is zero") {
    const CurvePath p(std::vector<PolygonCurve>(4, make_ellipse(12, 1.0, 0.5)));
    CHECK(discrete_energy({0.7, 0.05}, p) == 0.0);
    CHECK(energy_gradient({0.7, 0.05}, p).max_abs() == 0.0);
}

TEST_CASE("discrete energy matches direct summation") {
    const auto sq = make_circle(4, 1.0);
    const CurvePath p(std::vector<PolygonCurve>{sq, sq.translated({0.1, 0.0}), sq.translated({0.2, 0.0})});
    const double want = energy_by_hand(raw(p), 0.0, 0.0);
    CHECK(want > 0.0);
    CHECK(std::abs(discrete_energy({0.0, 0.0}, p) - want) <= 1e-14 * want);

    std::mt19937 rng(11);
    const auto q = random_path(5, 16, rng);
    const double w2 = energy_by_hand(raw(q), 0.4, 0.03);
    CHECK(discrete_energy({0.4, 0.03}, q) == doctest::Approx(w2).epsilon(1e-12));
}

TEST_CASE("discrete energy is homogeneous of degree three at A = 0, eps = 0") {
    std::mt19937 rng(12);
    const auto p = random_path(4, 12, rng);
    std::vector<PolygonCurve> scaled;
    for (const auto& c : p.curves()) scaled.push_back(c.scaled(2.5));
    CHECK(discrete_energy({0.0, 0.0}, CurvePath(scaled)) ==
          doctest::Approx(std::pow(2.5, 3) * discrete_energy({0.0, 0.0}, p)).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937 rng(2024);
    const MetricParams params{0.3, 0.05};
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_path(5, 16, rng);
        const auto g = energy_gradient(params, p);
        const double scale = g.max_abs();
        for (std::size_t i = 0; i < 16; ++i) {
            CHECK(norm(g.slices[0][i]) == 0.0);
            CHECK(norm(g.slices[4][i]) == 0.0);
        }
        for (std::size_t j = 1; j < 4; ++j) {
            for (std::size_t i = 0; i < 16; ++i) {
                for (int axis = 0; axis < 2; ++axis) {
                    auto plus = raw(p);
                    auto minus = raw(p);
                    const double e = 1e-6;
                    (axis ? plus[j][i].y : plus[j][i].x) += e;
                    (axis ? minus[j][i].y : minus[j][i].x) -= e;
                    auto mk = [](const std::vector<std::vector<Vec2>>& v) {
                        std::vector<PolygonCurve> s;
                        for (const auto& pts : v) s.emplace_back(pts);
                        return CurvePath(std::move(s));
                    };
                    const double fd = (discrete_energy(params, mk(plus)) - discrete_energy(params, mk(minus))) / (2 * e);
                    const double an = axis ? g.slices[j][i].y : g.slices[j][i].x;
                    worst = std::max(worst, std::abs(fd - an) / scale);
                }
            }
        }
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("gradient is unchanged by translating the path") {
    std::mt19937 rng(8);
    const auto p = random_path(5, 16, rng);
    std::vector<PolygonCurve> moved;
    for (const auto& c : p.curves()) moved.push_back(c.translated({4.0, -3.0}));
    const auto g1 = energy_gradient({0.2, 0.01}, p);
    const auto g2 = energy_gradient({0.2, 0.01}, CurvePath(moved));
    const double scale = g1.max_abs();
    for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < 16; ++i) CHECK(norm(g1.slices[j][i] - g2.slices[j][i]) <= 1e-9 * scale);
}

TEST_CASE("cyclic alignment and linear blend") {
    const auto a = make_ellipse(12, 1.0, 0.5);
    CHECK(best_cyclic_shift(a, a.cyclically_shifted(5)) == 7);
    const auto blend = linear_blend(a, a.scaled(2.0).cyclically_shifted(3), 5);
    CHECK(blend.time_samples() == 5);
    for (std::size_t i = 0; i < 12; ++i) CHECK(norm(blend[2][i] - 1.5 * a[i]) < 1e-14);
    CHECK_THROWS_AS(best_cyclic_shift(a, make_circle(10, 1.0)), CurveError);
}

TEST_CASE("start = end gives the static path") {
    const auto c = make_ellipse(16, 1.0, 0.5);
    const auto sol = solve_geodesic({0.1, 0}, small_config(), c, c);
    CHECK(sol.report.iterations <= 1);
    CHECK(sol.report.discrete_energy < 1e-25);
    CHECK(sol.report.energy < 1e-25);
    CHECK(sol.report.converged);
}

TEST_CASE("endpoints are resampled and stay fixed") {
    auto cfg = small_config();
    const auto c0 = make_circle(50, 1.0);
    const auto c1 = make_circle(30, 1.5);
    const auto sol = solve_geodesic({0.1, 0}, cfg, c0, c1);
    CHECK(sol.path.vertex_count() == 16);
    CHECK(sol.path.front() == resample_constant_speed(c0, 16));
    CHECK(sol.report.converged);
}

TEST_CASE("accepted iterates never increase the objective") {
    const auto c0 = make_circle(16, 1.0);
    const auto c1 = make_ellipse(16, 1.6, 0.8, 0.3);
    auto cfg = small_config();
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 40; k += 4) {
        cfg.max_iterations = k;
        const double f = solve_geodesic({0.2, 0}, cfg, c0, c1).report.discrete_energy;
        CHECK(f <= prev);
        prev = f;
    }
}

TEST_CASE("swapping the endpoints gives the same minimal energy") {
    const auto c0 = make_circle(16, 1.0);
    const auto c1 = make_ellipse(16, 1.4, 0.9, 0.4).translated({0.3, 0.1});
    const auto cfg = small_config();
    const auto fwd = solve_geodesic({0.2, 0}, cfg, c0, c1);
    const auto bwd = solve_geodesic({0.2, 0}, cfg, c1, c0);
    INFO(fwd.report.gradient_norm << " after " << fwd.report.iterations);
    REQUIRE(fwd.report.converged);
    REQUIRE(bwd.report.converged);
    CHECK(std::abs(fwd.report.discrete_energy - bwd.report.discrete_energy) <= 10.0 * cfg.gradient_tolerance);
    CHECK(discrete_energy({0.2, cfg.epsilon}, bwd.path.time_reversed()) ==
          doctest::Approx(bwd.report.discrete_energy).epsilon(1e-14));
}

TEST_CASE("rotating both endpoints rotates the minimizer") {
    const auto c0 = make_circle(16, 1.0);
    const auto c1 = make_ellipse(16, 1.4, 0.9, 0.4).translated({0.3, 0.1});
    const auto cfg = small_config();
    const double R = 0.9;
    const auto a = solve_geodesic({0.2, 0}, cfg, c0, c1);
    const auto b = solve_geodesic({0.2, 0}, cfg, c0.rotated(R), c1.rotated(R));
    CHECK(b.report.discrete_energy == doctest::Approx(a.report.discrete_energy).epsilon(1e-8));
    double dev = 0.0;
    for (std::size_t j = 0; j < a.path.time_samples(); ++j)
        for (std::size_t i = 0; i < 16; ++i) dev = std::max(dev, norm(b.path[j][i] - rotate(a.path[j][i], R)));
    CHECK(dev < 1e-5);
}

TEST_CASE("doubling the time samples barely moves the circle benchmark energy") {
    SolverConfig cfg;
    cfg.vertices = 40;
    cfg.time_samples = 20;
    const auto coarse = run_circle_benchmark({0.1, 0}, cfg);
    cfg.time_samples = 40;
    const auto fine = run_circle_benchmark({0.1, 0}, cfg);
    CHECK(coarse.solution.report.converged);
    CHECK(fine.solution.report.converged);
    CHECK(std::abs(fine.solution.report.energy - coarse.solution.report.energy) <
          0.05 * coarse.solution.report.energy);
}
