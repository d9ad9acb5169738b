#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "curveflow/errors.hpp"
#include "curveflow/metric.hpp"
#include "curveflow/shapes.hpp"
#include "curveflow/special.hpp"
#include "oracles.hpp"

using namespace curveflow;

namespace {

constexpr double pi = std::numbers::pi;

VectorField normal_field(const PolygonCurve& c, const std::function<double(double)>& f) {
    const auto nrm = vertex_normals(c);
    VectorField h;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double th = 2.0 * pi * static_cast<double>(i) / static_cast<double>(c.size());
        h.values.push_back(f(th) * nrm[i]);
    }
    return h;
}

VectorField random_field(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    VectorField h;
    for (std::size_t i = 0; i < n; ++i) h.values.push_back({g(rng), g(rng)});
    return h;
}

CurvePath static_path(const PolygonCurve& c, std::size_t T) { return CurvePath(std::vector<PolygonCurve>(T, c)); }

CurvePath rigidly_moved(const CurvePath& p, double angle, Vec2 shift) {
    std::vector<PolygonCurve> out;
    for (const auto& c : p.curves()) out.push_back(c.rotated(angle).translated(shift));
    return CurvePath(std::move(out));
}

}  // namespace

TEST_CASE("CurvePath checks its slices") {
    CHECK_THROWS_AS(CurvePath({make_circle(8, 1.0)}), CurveError);
    CHECK_THROWS_AS(CurvePath({make_circle(8, 1.0), make_circle(9, 1.0)}), CurveError);
    const CurvePath p({make_circle(8, 1.0), make_circle(8, 2.0), make_circle(8, 3.0)});
    CHECK(p.time_step() == doctest::Approx(0.5));
    CHECK(p.time_reversed()[0] == p[2]);
}

TEST_CASE("MetricParams validation") {
    CHECK_THROWS_AS((MetricParams{-1.0, 0.0}.validate()), CurveError);
    CHECK_THROWS_AS((MetricParams{0.0, -0.1}.validate()), CurveError);
    CHECK_NOTHROW((MetricParams{0.0, 0.0}.validate()));
}

TEST_CASE("G^A inner product on the unit circle") {
    for (double A : {0.0, 0.5, 3.0}) {
        double prev = 0.0;
        for (std::size_t n : {64u, 128u, 256u}) {
            const auto c = make_circle(n, 1.0);
            const auto h = normal_field(c, [](double) { return -1.0; });  // outward
            const double err = std::abs(inner_product({A, 0}, c, h, h) - 2.0 * pi * (1.0 + A));
            CHECK(err < 20.0 * (1.0 + A) / static_cast<double>(n * n));
            if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
            prev = err;
        }
    }
    const auto c = make_circle(256, 1.0);
    VectorField zero{std::vector<Vec2>(256)};
    CHECK(inner_product({2.0, 0}, c, zero, zero) == 0.0);
    const auto h = normal_field(c, [](double t) { return std::cos(t); });
    CHECK(inner_product({0.0, 0}, c, h, h) == doctest::Approx(pi).epsilon(1e-4));
}

TEST_CASE("inner product is symmetric, bilinear and positive definite") {
    std::mt19937 rng(3);
    for (std::size_t n : {16u, 64u, 256u}) {
        const auto c = make_ellipse(n, 1.0, 0.4, 0.3);
        const MetricParams p{0.7, 0};
        const auto h = random_field(n, rng);
        const auto k = random_field(n, rng);
        const auto l = random_field(n, rng);
        const double hk = inner_product(p, c, h, k);
        CHECK(hk == doctest::Approx(inner_product(p, c, k, h)).epsilon(1e-14));
        VectorField comb;
        for (std::size_t i = 0; i < n; ++i) comb.values.push_back(2.0 * h.values[i] - 3.0 * l.values[i]);
        CHECK(inner_product(p, c, comb, k) ==
              doctest::Approx(2.0 * hk - 3.0 * inner_product(p, c, l, k)).epsilon(1e-12));
        CHECK(inner_product(p, c, h, h) > 0.0);
    }
}

TEST_CASE("normal inner product agrees with the vector form") {
    const auto c = make_ellipse(40, 1.0, 0.5);
    NormalField a, b;
    for (std::size_t i = 0; i < 40; ++i) {
        a.values.push_back(std::sin(0.3 * i));
        b.values.push_back(std::cos(0.2 * i));
    }
    const auto nrm = vertex_normals(c);
    VectorField va, vb;
    for (std::size_t i = 0; i < 40; ++i) {
        va.values.push_back(a.values[i] * nrm[i]);
        vb.values.push_back(b.values[i] * nrm[i]);
    }
    CHECK(normal_inner_product({0.4, 0}, c, a, b) == doctest::Approx(inner_product({0.4, 0}, c, va, vb)).epsilon(1e-14));
}

TEST_CASE("tangential and normal decomposition") {
    const auto c = make_circle(64, 1.0);
    const auto nrm = vertex_normals(c);
    VectorField tangent, radial;
    for (std::size_t i = 0; i < 64; ++i) {
        tangent.values.push_back(-1.0 * perp(nrm[i]));
        radial.values.push_back(c[i]);
    }
    for (const auto& v : decompose(c, tangent).normal.values) CHECK(norm(v) <= 1e-12);
    for (const auto& v : decompose(c, radial).tangential.values) CHECK(norm(v) <= 1e-12);

    std::mt19937 rng(5);
    const auto e = make_ellipse(64, 2.0, 0.5, 0.4);
    const auto h = random_field(64, rng);
    const auto d = decompose(e, h);
    const auto en = vertex_normals(e);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(norm(h.values[i] - d.tangential.values[i] - d.normal.values[i]) <= 1e-14 * (1.0 + norm(h.values[i])));
        CHECK(d.normal_coeff.values[i] == doctest::Approx(dot(h.values[i], en[i])));
        CHECK(std::abs(dot(d.tangential.values[i], en[i])) < 1e-14 * (1.0 + norm(h.values[i])));
    }
}

TEST_CASE("path energy of expanding circles") {
    const auto path = oracle::circle_path(256, 801, [](double t) { return 1.0 + t; });
    CHECK(path_energy({0.0, 0}, path) == doctest::Approx(1.5 * pi).epsilon(0.01));
    // 1-D oracle: pi * int_0^1 (1 + A / r^2) r r_t^2 dt with r = 1 + t.
    const double A = 0.25;
    const double want = pi * oracle::simpson([&](double t) { return (1.0 + A / ((1 + t) * (1 + t))) * (1 + t); }, 0, 1);
    CHECK(path_energy({A, 0}, path) == doctest::Approx(want).epsilon(0.01));
    CHECK(path_energy({A, 0}, static_path(make_circle(32, 1.0), 5)) == 0.0);
}

TEST_CASE("horizontal length of expanding circles") {
    const auto path = oracle::circle_path(256, 801, [](double t) { return 1.0 + t; });
    const double want = oracle::simpson([](double r) { return std::sqrt(2.0 * pi * r); }, 1.0, 2.0);
    const double L = horizontal_path_length({0.0, 0}, path);
    CHECK(L == doctest::Approx(want).epsilon(0.01));
    CHECK(want == doctest::Approx(2.0 * std::sqrt(2.0 * pi) / 3.0 * (std::pow(2.0, 1.5) - 1.0)).epsilon(1e-10));
    // Constant speed: E = L^2 / 2 up to the discretization; E >= L^2 / 2 always.
    const double E = path_energy({0.0, 0}, path);
    CHECK(E >= 0.5 * L * L * (1.0 - 1e-12));
    CHECK(horizontal_path_length({1.0, 0}, static_path(make_circle(32, 1.0), 4)) == 0.0);

    // A path run at non-uniform speed still satisfies E >= L^2 / 2 strictly.
    const auto uneven = oracle::circle_path(128, 201, [](double t) { return 1.0 + t * t; });
    const double Lu = horizontal_path_length({0.3, 0}, uneven);
    CHECK(path_energy({0.3, 0}, uneven) > 0.5 * Lu * Lu * 1.05);
}

TEST_CASE("anisotropic area form equals the path energy on horizontal paths") {
    const auto circles = oracle::circle_path(128, 101, [](double t) { return 1.0 + t; });
    for (double A : {0.0, 0.3}) {
        CHECK(anisotropic_area_energy({A, 0}, circles) == doctest::Approx(path_energy({A, 0}, circles)).epsilon(1e-3));
    }
    const auto translating = translation_path(make_circle(96, 1.0), {1.0, 0.0}, 81);
    CHECK(horizontality_defect(translating) <= 1e-6);
    CHECK(anisotropic_area_energy({0.2, 0}, translating) ==
          doctest::Approx(path_energy({0.2, 0}, translating)).epsilon(1e-3));
    CHECK(anisotropic_area_energy({0.2, 0}, static_path(make_circle(16, 1.0), 3)) == 0.0);

    // A rigid translation moves vertices tangentially and is refused.
    std::vector<PolygonCurve> rigid;
    for (int j = 0; j < 5; ++j) rigid.push_back(make_circle(32, 1.0, {0.5 * j, 0.0}));
    try {
        anisotropic_area_energy({0.2, 0}, CurvePath(rigid));
        FAIL("expected NonHorizontalPath");
    } catch (const CurveError& e) {
        CHECK(e.code() == ErrorCode::NonHorizontalPath);
    }
}

TEST_CASE("area swept") {
    CHECK(area_swept(static_path(make_circle(16, 1.0), 3)) == 0.0);
    const auto annulus = oracle::circle_path(256, 201, [](double t) { return 1.0 + t; });
    CHECK(area_swept(annulus) == doctest::Approx(3.0 * pi).epsilon(0.01));
    // Area swept does not need a horizontal path: rigid translation by (2, 0).
    std::vector<PolygonCurve> rigid;
    for (int j = 0; j <= 100; ++j) rigid.push_back(make_circle(128, 1.0, {0.02 * j, 0.0}));
    CHECK(area_swept(CurvePath(rigid)) >= 4.0);
    // The lifted version of a shorter translation sweeps at least diameter x displacement.
    CHECK(area_swept(translation_path(make_circle(128, 1.0), {1.0, 0.0}, 101)) >= 2.0);
}

TEST_CASE("sqrt-length Lipschitz certificate") {
    const auto cert0 = lipschitz_certificate({1.0, 0}, static_path(make_circle(16, 1.0), 3));
    CHECK(cert0.lhs == doctest::Approx(0.0).scale(1.0));
    CHECK(cert0.rhs == 0.0);

    const auto grow = oracle::circle_path(128, 101, [](double t) { return 1.0 + t; });
    const auto cert = lipschitz_certificate({1.0, 0}, grow);
    CHECK(cert.lhs == doctest::Approx(std::sqrt(4.0 * pi) - std::sqrt(2.0 * pi)).epsilon(1e-3));
    CHECK(cert.lhs <= cert.rhs);

    const auto shrink = lipschitz_certificate({1.0, 0}, grow.time_reversed());
    CHECK(shrink.lhs < 0.0);
    CHECK(shrink.rhs >= 0.0);

    CHECK_THROWS_AS(lipschitz_certificate({0.0, 0}, grow), CurveError);
}

TEST_CASE("rigid motions leave every path functional unchanged") {
    const auto path = translation_path(make_ellipse(64, 1.0, 0.5), {0.5, 0.25}, 21);
    const auto moved = rigidly_moved(path, 0.7, {3.0, -2.0});
    const MetricParams p{0.4, 0};
    CHECK(path_energy(p, moved) == doctest::Approx(path_energy(p, path)).epsilon(1e-12));
    CHECK(horizontal_path_length(p, moved) == doctest::Approx(horizontal_path_length(p, path)).epsilon(1e-12));
    CHECK(anisotropic_area_energy(p, moved) == doctest::Approx(anisotropic_area_energy(p, path)).epsilon(1e-12));
    CHECK(area_swept(moved) == doctest::Approx(area_swept(path)).epsilon(1e-12));
    CHECK(graph_area(moved) == doctest::Approx(graph_area(path)).epsilon(1e-12));
    const auto c1 = lipschitz_certificate(p, path);
    const auto c2 = lipschitz_certificate(p, moved);
    CHECK(c2.lhs == doctest::Approx(c1.lhs).epsilon(1e-10));
    CHECK(c2.rhs == doctest::Approx(c1.rhs).epsilon(1e-12));

    const auto c = make_ellipse(30, 1.0, 0.6);
    std::mt19937 rng(9);
    const auto h = random_field(30, rng);
    VectorField hr;
    for (const auto& v : h.values) hr.values.push_back(rotate(v, 0.7));
    CHECK(inner_product(p, c.rotated(0.7).translated({1, 1}), hr, hr) ==
          doctest::Approx(inner_product(p, c, h, h)).epsilon(1e-12));
}

TEST_CASE("path energy does not depend on the slice parametrization in the limit") {
    // Scaled ellipses sampled uniformly in the angle parameter versus the same
    // slices resampled at constant speed.
    auto gap = [](std::size_t n) {
        std::vector<PolygonCurve> raw, even;
        const std::size_t T = 41;
        for (std::size_t j = 0; j < T; ++j) {
            const double s = 1.0 + static_cast<double>(j) / (T - 1);
            raw.push_back(make_ellipse(n, 1.5 * s, 0.75 * s));
            even.push_back(resample_constant_speed(make_ellipse(8 * n, 1.5 * s, 0.75 * s), n));
        }
        const MetricParams p{0.1, 0};
        const double a = path_energy(p, CurvePath(raw));
        const double b = path_energy(p, CurvePath(even));
        return std::abs(a - b) / b;
    };
    const double g1 = gap(32);
    const double g2 = gap(64);
    const double g3 = gap(128);
    CHECK(g1 / g2 >= 2.0);
    CHECK(g2 / g3 >= 2.0);
}

TEST_CASE("certificate suite on assorted paths") {
    const MetricParams p{0.25, 0};
    const std::vector<CurvePath> paths{
        oracle::circle_path(64, 41, [](double t) { return 1.0 + t; }),
        oracle::circle_path(64, 41, [](double t) { return 2.0 - 1.5 * t; }),
        translation_path(make_circle(64, 1.0), {1.5, 0.0}, 41),
        translation_path(make_ellipse(64, 1.0, 0.3), {0.0, 0.4}, 41),
        static_path(make_ellipse(20, 1.0, 0.5), 3),
    };
    for (const auto& path : paths) {
        for (const auto& c : check_certificates(p, path)) {
            INFO(c.name << ": " << c.lhs << " <= " << c.rhs);
            CHECK(c.passed);
        }
        const auto r = make_report(p, path);
        CHECK(r.certificates_passed);
        CHECK(r.energy >= 0.0);
        CHECK(r.path_length >= 0.0);
        CHECK(r.graph_area <= r.graph_area_bound * 1.05 + 1e-6);
    }
    // A = 0 has no Lipschitz bound; the other two checks remain.
    CHECK(check_certificates({0.0, 0}, paths[0]).size() == 2);
}

TEST_CASE("horizontal lift of a rigid translation") {
    std::vector<PolygonCurve> rigid;
    for (int j = 0; j < 21; ++j) rigid.push_back(make_circle(64, 1.0, {0.05 * j, 0.0}));
    const auto lifted = horizontal_lift(CurvePath(rigid));
    CHECK(horizontality_defect(CurvePath(rigid)) > 0.1);
    CHECK(horizontality_defect(lifted) < 1e-9);
    CHECK(lifted[0] == rigid[0]);
    // Every lifted slice lies on the corresponding circle.
    for (std::size_t j = 0; j < 21; ++j)
        for (const auto& v : lifted[j].vertices())
            CHECK(norm(v - Vec2{0.05 * j, 0.0}) == doctest::Approx(1.0).epsilon(2e-3));
}
