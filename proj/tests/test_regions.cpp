#include <catch2/catch_amalgamated.hpp>
#include <coam/regions.hpp>

#include <cmath>

using namespace coam;

namespace {

double polygon_area(const TorusPolygon& poly) {
    double a = 0;
    for (std::size_t i = 0; i < poly.verts.size(); ++i) {
        const auto& u = poly.verts[i];
        const auto& v = poly.verts[(i + 1) % poly.verts.size()];
        a += u[0] * v[1] - u[1] * v[0];
    }
    return std::abs(a) / 2;
}

}  // namespace

TEST_CASE("membership in the standard coamoeba") {
    CHECK(standard_coamoeba_member({kPi}));
    CHECK(!standard_coamoeba_member({3.0}));
    CHECK(standard_coamoeba_member({kTwoPi / 3, 2 * kTwoPi / 3}));
    CHECK(standard_coamoeba_member({1.0, 4.0}));
    CHECK(!standard_coamoeba_member({kPi / 4, kPi / 2}));
    CHECK(!standard_coamoeba_member({kPi, kPi / 2}));  // -1 on the cone boundary
    CHECK(!standard_coamoeba_member({0.3, 0.3}));
    CHECK_THROWS_AS(standard_coamoeba_member({}), error);
}

TEST_CASE("standard hyperplane regions") {
    auto r1 = standard_hyperplane_coamoeba(1);
    REQUIRE(r1.points.size() == 1);
    CHECK(r1.points[0].first == Catch::Approx(kPi));
    CHECK(r1.points[0].second == 1);

    auto r2 = standard_hyperplane_coamoeba(2);
    REQUIRE(r2.polygons.size() == 2);
    double total = 0;
    for (const auto& poly : r2.polygons) {
        REQUIRE(poly.verts.size() == 3);
        CHECK(poly.multiplicity == 1);
        total += polygon_area(poly);
        // region interiors are inside the membership predicate
        double cx = (poly.verts[0][0] + poly.verts[1][0] + poly.verts[2][0]) / 3;
        double cy = (poly.verts[0][1] + poly.verts[1][1] + poly.verts[2][1]) / 3;
        CHECK(standard_coamoeba_member({cx, cy}));
    }
    CHECK(total == Catch::Approx(kPi * kPi).margin(1e-12));
    CHECK_THROWS_AS(standard_hyperplane_coamoeba(3), error);
}

TEST_CASE("simplex coamoeba counts and transforms") {
    auto f1 = parse_polynomial("1+z1^2*z2^3+z1^3*z2");
    auto s1 = simplex_coamoeba(f1);
    CHECK(s1.componentCount == 7);
    CHECK(s1.base == Exponent{0, 0});
    CHECK(s1.L == IntMat{{3, 1}, {2, 3}});
    CHECK(s1.transform[0][0] == Rat(3, 7));
    CHECK(s1.transform[0][1] == Rat(-1, 7));
    CHECK(s1.transform[1][0] == Rat(-2, 7));
    CHECK(s1.transform[1][1] == Rat(3, 7));
    CHECK(s1.regions.polygons.size() == 14);

    auto f2 = parse_polynomial("z1^2*z2^2+z1+z2");
    auto s2 = simplex_coamoeba(f2);
    CHECK(s2.componentCount == 3);
    CHECK(s2.base == Exponent{0, 1});
    CHECK(s2.L == IntMat{{1, -1}, {2, 1}});
    CHECK(s2.transform[0][0] == Rat(1, 3));
    CHECK(s2.transform[0][1] == Rat(1, 3));
    CHECK(s2.transform[1][0] == Rat(-2, 3));
    CHECK(s2.transform[1][1] == Rat(1, 3));
    CHECK(s2.regions.polygons.size() == 6);

    // total area is pi^2 regardless of the component count
    for (const auto& s : {s1, s2}) {
        double total = 0;
        for (const auto& poly : s.regions.polygons) total += polygon_area(poly);
        CHECK(total == Catch::Approx(kPi * kPi).margin(1e-9));
    }
}

TEST_CASE("simplex coamoeba of the line is the standard picture") {
    auto s = simplex_coamoeba(parse_polynomial("1+z+w"));
    CHECK(s.componentCount == 1);
    CHECK(s.L == IntMat{{1, 0}, {0, 1}});
    CHECK(s.regions.polygons.size() == 2);
    double total = 0;
    for (const auto& poly : s.regions.polygons) total += polygon_area(poly);
    CHECK(total == Catch::Approx(kPi * kPi).margin(1e-12));
}

TEST_CASE("simplex coamoeba rejects non-simplex support") {
    CHECK_THROWS_AS(simplex_coamoeba(parse_polynomial("1+2*w+z^2*w+z*w^2")), error);
    CHECK_THROWS_AS(simplex_coamoeba(parse_polynomial("1+z*w")), degenerate_error);
}

TEST_CASE("univariate simplex points match the root arguments") {
    auto p = parse_polynomial("z^3-8");
    auto s = simplex_coamoeba(p);
    CHECK(s.componentCount == 3);
    REQUIRE(s.regions.points.size() == 3);
    auto args = univariate_coamoeba(p);
    REQUIRE(args.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.regions.points[i].first == Catch::Approx(args[i].first).margin(1e-9));
        CHECK(args[i].second == 1);
    }
    CHECK(args[0].first == Catch::Approx(0.0).margin(1e-9));
    CHECK(args[1].first == Catch::Approx(kTwoPi / 3).margin(1e-9));
}

TEST_CASE("nonarchimedean coamoeba over a triangulated square") {
    std::vector<Exponent> pts = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    auto sd = regular_subdivision(pts, std::vector<Rat>{Rat(0), Rat(0), Rat(0), Rat(-1)});
    REQUIRE(is_triangulation(sd));
    Lifting lift;
    for (const auto& p : pts) lift.entries[p] = {0.0, 0.0};
    auto rs = nonarch_coamoeba(sd, lift);
    CHECK(rs.n == 2);
    // both unimodular cells map onto the same two triangles, which merge
    CHECK(rs.polygons.size() == 2);
    double total = 0, weighted = 0;
    for (const auto& poly : rs.polygons) {
        CHECK(poly.multiplicity == 2);
        total += polygon_area(poly);
        weighted += polygon_area(poly) * (double)poly.multiplicity;
    }
    CHECK(total == Catch::Approx(kPi * kPi).margin(1e-9));
    CHECK(weighted == Catch::Approx(2 * kPi * kPi).margin(1e-9));  // 2 pi^2 Area exactly

    auto flat = regular_subdivision(pts, std::vector<Rat>{Rat(0), Rat(0), Rat(0), Rat(0)});
    CHECK(!is_triangulation(flat));
    CHECK_THROWS_AS(nonarch_coamoeba(flat, lift), error);
}

TEST_CASE("nonarchimedean coamoeba merges coincident pieces") {
    std::vector<Exponent> pts = {{0}, {1}, {2}};
    auto sd = regular_subdivision(pts, std::vector<Rat>{Rat(0), Rat(-1), Rat(0)});
    Lifting lift;
    for (const auto& p : pts) lift.entries[p] = {0.0, 0.0};
    auto rs = nonarch_coamoeba(sd, lift);
    REQUIRE(rs.points.size() == 1);
    CHECK(rs.points[0].first == Catch::Approx(kPi));
    CHECK(rs.points[0].second == 2);  // both cells contribute the same point
}

TEST_CASE("univariate coamoeba clusters root arguments") {
    auto pts = univariate_coamoeba(parse_polynomial("1+z^2"));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].first == Catch::Approx(kPi / 2).margin(1e-9));
    CHECK(pts[1].first == Catch::Approx(3 * kPi / 2).margin(1e-9));

    // (z-1)^2 (z+1/2) = z^3 - 1.5 z^2 + 0.5
    auto m = univariate_coamoeba(parse_polynomial("z^3-1.5*z^2+0.5"), 1e-6);
    REQUIRE(m.size() == 2);
    CHECK(m[0].first == Catch::Approx(0.0).margin(1e-6));
    CHECK(m[0].second == 2);
    CHECK(m[1].first == Catch::Approx(kPi).margin(1e-9));
    CHECK(m[1].second == 1);

    CHECK_THROWS_AS(univariate_coamoeba(parse_polynomial("1+z+w")), error);
}
