#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "geometry_suite.hpp"
#include "oracles.hpp"
#include "zonoplan/geometry.hpp"

using namespace zp;
using Catch::Approx;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
}  // namespace

TEST_CASE("membership on the unit box") {
    CZono z = make_zonotope(Vec::Zero(2), Mat::Identity(2, 2));
    auto m = contains_point(z, v2(0, 0));
    CHECK(m.inside);
    CHECK(m.margin == Approx(1.0));
    CHECK_FALSE(contains_point(z, v2(1.5, 0)).inside);
    CHECK_THROWS_AS(contains_point(z, Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("constrained zonotope membership matches the xi grid") {
    Vec c = Vec::Zero(2);
    Mat G(2, 3);
    G << 1, 0, 1, 0, 1, 1;
    Mat A(1, 3);
    A << 1, 1, 1;
    Vec b(1);
    b << 1;
    CZono z = make_czono(c, G, A, b);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    int compared = 0;
    for (int k = 0; k < 300; ++k) {
        Vec p = v2(u(rng), u(rng));
        auto m = contains_point(z, p);
        if (std::abs(m.margin) < 0.2) continue;  // grid resolution is 0.025 in xi
        bool ref = oracle::xi_grid_contains(c, G, A, b, p, 80, 0.04);
        CHECK(ref == m.inside);
        ++compared;
    }
    CHECK(compared > 100);
}

TEST_CASE("membership agrees with the enumeration oracle on random sets") {
    auto r = suite::membership_agreement(120, 25, 11);
    INFO(r.first_failure);
    CHECK(r.sets >= 100);
    CHECK(r.compared > 2000);
    CHECK(r.disagreements == 0);
}

TEST_CASE("emptiness") {
    Mat G = Mat::Identity(2, 2);
    Mat A(1, 2);
    A << 1, 1;
    Vec b(1);
    b << 3;
    CHECK(is_empty(make_czono(Vec::Zero(2), G, A, b)));
    A << 1, 0;
    b << 0.5;
    CHECK_FALSE(is_empty(make_czono(Vec::Zero(2), G, A, b)));
    CHECK_FALSE(is_empty(make_zonotope(Vec::Zero(2), G)));
}

TEST_CASE("expansion") {
    Mat G(2, 2);
    G << 1, 0.3, 0, 1;
    CZono z = make_zonotope(v2(1, 2), G);
    CZono e = expand(z, 0.2);
    CHECK((e.G - 1.2 * G).norm() < 1e-12);
    CHECK((e.c - z.c).norm() == 0.0);
    CHECK((expand(z, 0.0).G - G).norm() == 0.0);
    CHECK_THROWS(expand(z, -0.1));

    CZono t = from_vertices_2d({Vec2(0, 0), Vec2(2, 0), Vec2(0, 2)});
    CZono te = expand(t, 0.2);
    CHECK((te.G - 1.2 * t.G).norm() < 1e-12);
    CHECK((te.b - 1.2 * t.b).norm() < 1e-12);

    auto r = suite::expand_soundness(1000, 3);
    CHECK(r.disagreements == 0);
}

TEST_CASE("generator scaling is not an expansion for every constrained zonotope") {
    // The constraint xi1 = 0.9 pins the set to a segment; scaling b past
    // the generator box empties it.
    Mat A(1, 2);
    A << 1, 0;
    Vec b(1);
    b << 0.9;
    CZono s = make_czono(Vec::Zero(2), Mat::Identity(2, 2), A, b);
    CHECK_FALSE(is_empty(s));
    CHECK(is_empty(expand(s, 0.2)));
}

TEST_CASE("contraction") {
    CZono box = make_box(Vec::Zero(2), Vec::Ones(2));
    CZono c = contract(box, 0.1);
    Vec lo, hi;
    REQUIRE(is_axis_box(c, &lo, &hi));
    CHECK(lo(0) == Approx(0.1));
    CHECK(hi(1) == Approx(0.9));
    CHECK((contract(box, 0.0).G - box.G).norm() == 0.0);
    CHECK(contract(box, 0.6).empty_marker);

    auto r = suite::contract_soundness(1000, 0.05, 5);
    CHECK(r.points > 5000);
    CHECK(r.disagreements == 0);
}

TEST_CASE("intersection") {
    CZono a = make_box(Vec::Zero(2), Vec::Ones(2));
    CZono far = make_box(Vec::Constant(2, 4), Vec::Constant(2, 5));
    CHECK(is_empty(intersect(a, far)));
    CZono b = make_box(Vec::Constant(2, 0.5), Vec::Constant(2, 1.5));
    CZono ab = intersect(a, b), ba = intersect(b, a), aa = intersect(a, a);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-0.5, 2.0);
    for (int k = 0; k < 1000; ++k) {
        Vec p = v2(u(rng), u(rng));
        bool ref = p(0) >= 0.5 && p(0) <= 1 && p(1) >= 0.5 && p(1) <= 1;
        bool lp = contains_point(ab, p).inside;
        CHECK(lp == ref);
        CHECK(contains_point(ba, p).inside == lp);
        CHECK(contains_point(aa, p).inside == contains_point(a, p).inside);
        CHECK(ab.contains(p) == lp);
    }
}

TEST_CASE("halfspace fast path agrees with the LP") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int s = 0; s < 20; ++s) {
        CZono z = suite::random_czono(rng, 2);
        REQUIRE(z.hrep);
        for (int k = 0; k < 100; ++k) {
            Vec p = v2(u(rng), u(rng));
            auto m = contains_point(z, p);
            if (std::abs(m.margin) < 1e-6) continue;
            CHECK(z.contains(p) == m.inside);
        }
    }
}

TEST_CASE("generator norm") {
    CHECK(g_norm(Mat::Identity(2, 2), v2(3, -4)) == Approx(4.0));
    CHECK(g_norm(Mat::Identity(2, 2), v2(0, 0)) == 0.0);
    Mat G(2, 2);
    G << 1, 1, 0, 1;
    CHECK(g_norm(G, v2(1, 1)) == Approx(std::sqrt(2.0)));

    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    Mat H(2, 3);
    H << 1, 0.5, -0.2, 0.1, 1, 0.7;
    for (int k = 0; k < 10000; ++k) {
        Vec a = v2(u(rng), u(rng)), b = v2(u(rng), u(rng));
        double s = 5 * u(rng);
        CHECK(g_norm(H, a + b) <= g_norm(H, a) + g_norm(H, b) + 1e-12);
        CHECK(std::abs(g_norm(H, s * a) - std::abs(s) * g_norm(H, a)) <= 1e-12);
    }
}

TEST_CASE("planar vertex conversions") {
    auto v = to_vertices_2d(make_zonotope(Vec::Zero(2), Mat::Identity(2, 2)));
    REQUIRE(v.size() == 4);
    CHECK(polygon_area(v) == Approx(4.0));
    for (const auto& p : v) CHECK(std::abs(std::abs(p.x()) - 1) + std::abs(std::abs(p.y()) - 1) < 1e-12);

    Mat G(2, 2);
    G << 1, 1, 0, 1;
    auto pv = to_vertices_2d(make_zonotope(Vec::Zero(2), G));
    std::vector<Vec2> signs;
    for (double s1 : {-1.0, 1.0})
        for (double s2 : {-1.0, 1.0}) signs.push_back(G * Vec2(s1, s2));
    auto ref = convex_hull_2d(signs);
    REQUIRE(pv.size() == ref.size());
    for (size_t i = 0; i < pv.size(); ++i) CHECK((pv[i] - ref[i]).norm() < 1e-12);

    Vec2 a(0, 0), b(3, 0.5), c(1, 2);
    CZono t = from_vertices_2d({a, b, c});
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-0.5, 3.5);
    for (int k = 0; k < 1000; ++k) {
        Vec2 p(u(rng), u(rng));
        auto m = contains_point(t, p);
        if (std::abs(m.margin) < 1e-9) continue;
        CHECK(m.inside == oracle::in_triangle(a, b, c, p));
    }
    // round trip through the constrained form solved by support queries
    CZono rt = from_vertices_2d(to_vertices_2d(suite::random_czono(rng, 2)));
    CHECK(rt.hrep);
    CHECK_THROWS(to_vertices_2d(make_box(Vec::Zero(3), Vec::Ones(3))));
}

TEST_CASE("degenerate generators are dropped") {
    Mat G(2, 3);
    G << 1, 0, 0, 0, 0, 1;
    CZono z = make_zonotope(Vec::Zero(2), G);
    CHECK(z.ngen() == 2);
}

TEST_CASE("inflation is the Minkowski sum with the inf ball") {
    CZono t = from_vertices_2d({Vec2(0, 0), Vec2(2, 0), Vec2(0, 2)});
    CZono i = inflate(t, 0.2);
    CHECK(i.contains(v2(-0.2, -0.2)));
    CHECK(i.contains(v2(2.2, 0.0)));
    CHECK_FALSE(i.contains(v2(-0.25, 0.0)));
    CZono bi = inflate(make_box(Vec::Zero(2), Vec::Ones(2)), 0.5);
    Vec lo, hi;
    REQUIRE(is_axis_box(bi, &lo, &hi));
    CHECK(lo(0) == Approx(-0.5));
}
