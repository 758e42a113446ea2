#include <catch2/catch_amalgamated.hpp>
#include <coam/poly.hpp>
#include <coam/polytope.hpp>
#include <coam/subdivision.hpp>
#include <coam/tropical.hpp>

#include <algorithm>

using namespace coam;

static std::vector<Exponent> sorted(std::vector<Exponent> v) {
    std::sort(v.begin(), v.end());
    return v;
}

TEST_CASE("newton_polytope of the parabola family") {
    auto p = parse_polynomial("w^2-0.5*w+2*z*w-z^2*w+1");
    auto np = newton_polytope(p);
    REQUIRE(!np.degenerate);
    CHECK(sorted(np.vertices) == std::vector<Exponent>{{0, 0}, {0, 2}, {2, 1}});
    CHECK(np.contains({1, 1}));
    CHECK(!np.on_boundary({1, 1}));
    CHECK(np.on_boundary({0, 1}));
    CHECK(!np.contains({3, 0}));
    CHECK(sorted(np.latticePoints) ==
          std::vector<Exponent>{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 1}});
    CHECK(normalized_volume(np) == 4);
}

TEST_CASE("normalized volumes across dimensions") {
    auto vol = [](const char* s) {
        return normalized_volume(newton_polytope(parse_polynomial(s)));
    };
    CHECK(vol("1+z+w") == 1);
    CHECK(vol("1+2*w+z^2*w+z*w^2") == 4);
    CHECK(vol("(0,1)*w+z+z*w^2+z^3*w") == 6);
    CHECK(vol("1+z1^2*z2^3+z1^3*z2") == 7);
    CHECK(vol("z1^2*z2^2+z1+z2") == 3);
    CHECK(vol("1+z^2") == 2);
    CHECK(vol("1+z1+z2+z3") == 1);
    CHECK(vol("1+z1^2+z2^2+z3^2") == 8);
}

TEST_CASE("maximal sparseness predicate") {
    CHECK(is_maximally_sparse(parse_polynomial("1+z+w")));
    CHECK(is_maximally_sparse(parse_polynomial("1+2*w+z^2*w+z*w^2")));
    CHECK(!is_maximally_sparse(parse_polynomial("w^2-0.5*w+2*z*w-z^2*w+1")));
    CHECK(!is_maximally_sparse(parse_polynomial("w-z^2+2*z-3")));
}

TEST_CASE("degenerate supports are flagged") {
    auto np = newton_polytope(parse_polynomial("1+z*w"));
    CHECK(np.degenerate);
    CHECK(np.affineDim == 1);
}

TEST_CASE("regular subdivision of a lifted square") {
    std::vector<Exponent> sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    auto sd = regular_subdivision(sq, std::vector<Rat>{0, 0, 0, -1});
    REQUIRE(sd.cells.size() == 2);
    CHECK(is_triangulation(sd));
    CHECK(sd.edges.size() == 5);
    for (const auto& pt : sq) CHECK(sd.is_vertex(pt));

    auto flat = regular_subdivision(sq, std::vector<Rat>{0, 0, 0, 0});
    REQUIRE(flat.cells.size() == 1);
    CHECK(!is_triangulation(flat));
    CHECK(flat.edges.size() == 4);
}

TEST_CASE("segment subdivision, envelope, and force_split") {
    std::vector<Exponent> seg{{0}, {1}, {2}};

    auto lifted = regular_subdivision(seg, std::vector<Rat>{0, 1, 0});
    REQUIRE(lifted.cells.size() == 1);
    CHECK(!lifted.is_vertex({1}));
    CHECK(sorted(lifted.vertex_set()) == std::vector<Exponent>{{0}, {2}});

    auto dipped = regular_subdivision(seg, std::vector<Rat>{0, -1, 0});
    REQUIRE(dipped.cells.size() == 2);
    CHECK(dipped.is_vertex({1}));
    CHECK(envelope_value(dipped, {1}) == Rat(-1));

    auto split = force_split(lifted, {1});
    CHECK(split.cells.size() == 2);
    CHECK(split.is_vertex({1}));
}

TEST_CASE("tropical line: corner locus and balancing") {
    auto tp = make_tropical({{0, 0}, {1, 0}, {0, 1}}, {Rat(0), Rat(0), Rat(0)});
    auto tc = corner_locus(tp);
    REQUIRE(tc.vertices.size() == 1);
    CHECK(tc.vertices[0].pos[0] == Rat(0));
    CHECK(tc.vertices[0].pos[1] == Rat(0));
    CHECK(tc.edges.empty());
    REQUIRE(tc.rays.size() == 3);
    std::vector<IntVec> dirs;
    for (const auto& r : tc.rays) dirs.push_back(r.dir);
    std::sort(dirs.begin(), dirs.end());
    CHECK(dirs == std::vector<IntVec>{{-1, 0}, {0, -1}, {1, 1}});
    for (const auto& r : tc.rays) CHECK(r.weight == 1);
    CHECK(check_balancing(tc));
}

TEST_CASE("bounded spine edge and its dual subdivision") {
    auto tp =
        make_tropical({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {Rat(0), Rat(0), Rat(0), Rat(-1)});
    auto tc = corner_locus(tp);
    REQUIRE(tc.vertices.size() == 2);
    REQUIRE(tc.edges.size() == 1);
    CHECK(tc.rays.size() == 4);
    CHECK(check_balancing(tc));

    auto sd = dual_subdivision(tp);
    REQUIRE(sd.cells.size() == 2);
    for (const auto& cell : sd.cells) CHECK(cell.vertices.size() == 3);
}

TEST_CASE("edge weights follow dual lattice length") {
    auto tp = make_tropical({{0, 0}, {2, 0}, {0, 1}}, {Rat(0), Rat(0), Rat(0)});
    auto tc = corner_locus(tp);
    REQUIRE(tc.rays.size() == 3);
    std::vector<long long> ws;
    for (const auto& r : tc.rays) ws.push_back(r.weight);
    std::sort(ws.begin(), ws.end());
    CHECK(ws == std::vector<long long>{1, 1, 2});
    CHECK(check_balancing(tc));
}

TEST_CASE("spine_from_phi agrees with exact corner locus") {
    std::vector<Exponent> exps{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    auto spine = spine_from_phi(exps, {0.0, 0.0, 0.0, -1.0});
    CHECK(spine.vertices.size() == 2);
    CHECK(spine.edges.size() == 1);
    CHECK(spine.rays.size() == 4);
    CHECK(check_balancing(spine));
    CHECK(spine.dual.cells.size() == 2);
}

TEST_CASE("lifting lookups") {
    Lifting lift;
    lift.entries[{0, 0}] = {1.0, 0.25};
    lift.entries[{1, 0}] = {-2.0, 1.5};
    CHECK(lift.height_of({1, 0}) == -2.0);
    CHECK(lift.phase_of({0, 0}) == 0.25);
    CHECK_THROWS_AS(lift.phase_of({5, 5}), error);
}
