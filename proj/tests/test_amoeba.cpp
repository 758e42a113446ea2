#include <catch2/catch_amalgamated.hpp>
#include <coam/amoeba.hpp>
#include <coam/poly.hpp>
#include <coam/shell.hpp>
#include <coam/subdivision.hpp>

#include <algorithm>

using namespace coam;

TEST_CASE("lopsidedness certificates in the corners") {
    auto p = parse_polynomial("1+z+w");
    double margin = 0;
    auto a = lopsided_order(p, {-10.0, -10.0}, &margin);
    REQUIRE(a.has_value());
    CHECK(*a == Exponent{0, 0});
    CHECK(margin > 0);
    auto b = lopsided_order(p, {10.0, 0.0});
    REQUIRE(b.has_value());
    CHECK(*b == Exponent{1, 0});
    CHECK(!lopsided_order(p, {0.0, 0.0}).has_value());
}

TEST_CASE("order map of the line") {
    auto p = parse_polynomial("1+z+w");
    std::vector<double> lo, hi;
    default_search_box(p, lo, hi, 5.0);
    auto rep = order_map_report(p, lo, hi);
    REQUIRE(rep.imageOfOrder.size() == 3);
    CHECK(rep.imageOfOrder ==
          std::vector<Exponent>{{0, 0}, {0, 1}, {1, 0}});
    for (const auto& c : rep.components) {
        CHECK(c.lopsidedCertified);
        CHECK(!c.bounded);
        CHECK(c.margin > 0);
    }
}

TEST_CASE("pinched fibers cannot fake a component") {
    // for lambda < 2 the fiber quadratic w^2 - lambda w + 1 at z -> 0 keeps
    // both roots on the unit circle, so no order-(0,1) component exists
    auto p = parse_polynomial("w^2-0.5*w+2*z*w-z^2*w+1");
    std::vector<double> lo, hi;
    default_search_box(p, lo, hi, 5.0);
    auto rep = order_map_report(p, lo, hi);
    CHECK(rep.imageOfOrder == std::vector<Exponent>{{0, 0}, {0, 2}, {2, 1}});
    bool warned = false;
    for (const auto& w : rep.warnings) warned |= w.find("(0,1)") != std::string::npos;
    CHECK(warned);

    // for lambda = 3 the component is genuine (lopsided near z -> 0)
    auto q = parse_polynomial("w^2-3*w+2*z*w-z^2*w+1");
    default_search_box(q, lo, hi, 5.0);
    auto repq = order_map_report(q, lo, hi);
    CHECK(repq.imageOfOrder ==
          std::vector<Exponent>{{0, 0}, {0, 1}, {0, 2}, {2, 1}});
    CHECK(repq.find({0, 1}) != nullptr);
    CHECK(repq.find({0, 1})->lopsidedCertified);
}

TEST_CASE("membership verdicts") {
    auto p = parse_polynomial("1+z+w");
    auto out = amoeba_membership(p, {-10.0, -10.0});
    CHECK(out.verdict == Membership::outside);
    REQUIRE(out.order.has_value());
    CHECK(*out.order == Exponent{0, 0});
    auto in = amoeba_membership(p, {0.0, 0.0});
    CHECK(in.verdict == Membership::inside);
}

TEST_CASE("phi at a vertex estimates the exact coefficient") {
    auto p = parse_polynomial("1+z+w");
    PhiOptions opts;
    opts.samples = 100000;
    auto phi = phi_alpha(p, {0, 0}, {-10.0, -10.0}, opts);
    CHECK(std::abs(phi.cAlpha - 0.0) <= 3 * phi.stdError + 1e-3);
    CHECK(std::abs(wrap_signed(phi.imPhase - 0.0)) < 1e-3);
    CHECK(phi.samples == 100000);
}

TEST_CASE("univariate phi matches the closed forms") {
    // f = (z-2)(z-40) = 80 - 42 z + z^2
    auto p = make_polynomial(1, {{{0}, Cplx(80)}, {{1}, Cplx(-42)}, {{2}, Cplx(1)}});
    PhiOptions opts;
    opts.samples = 50000;

    auto mid = phi_alpha(p, {1}, {std::log(9.0)}, opts);
    CHECK(std::abs(mid.cAlpha - std::log(40.0)) <= 3 * mid.stdError + 1e-3);
    CHECK(std::abs(wrap_signed(mid.imPhase - kPi)) < 0.05);

    auto low = phi_alpha(p, {0}, {std::log(0.5)}, opts);
    CHECK(std::abs(low.cAlpha - std::log(80.0)) <= 3 * low.stdError + 1e-3);
    CHECK(std::abs(wrap_signed(low.imPhase)) < 0.05);

    auto high = phi_alpha(p, {2}, {std::log(100.0)}, opts);
    CHECK(std::abs(high.cAlpha) <= 3 * high.stdError + 1e-3);
    CHECK(std::abs(wrap_signed(high.imPhase)) < 0.05);
}

TEST_CASE("phi rejects a fiber through the zeros") {
    auto p = parse_polynomial("1+z^2");  // both roots on |z| = 1
    PhiOptions opts;
    opts.samples = 2000;
    opts.gridRetries = 1;
    CHECK_THROWS_AS(phi_alpha(p, {1}, {0.0}, opts), numeric_error);
}

TEST_CASE("index typing of the deleted middle coefficient") {
    auto p = parse_polynomial("1+z^2");
    auto r = classify_index_type(p, {1});
    CHECK(r.typeI);
    CHECK(r.heuristic);
    CHECK(r.beta == Exponent{1});
}

TEST_CASE("nu assembly on the line uses the exact vertex forms") {
    auto p = parse_polynomial("1+z+w");
    std::vector<double> lo, hi;
    default_search_box(p, lo, hi, 5.0);
    auto rep = order_map_report(p, lo, hi);
    PhiOptions phiOpts;
    phiOpts.samples = 20000;
    std::map<Exponent, PhiEstimate> phis;
    for (const auto& c : rep.components)
        phis[c.order] = phi_alpha(p, c.order, c.representative, phiOpts);
    std::vector<Exponent> exps;
    std::vector<Rat> heights;
    for (const auto& [a, phi] : phis) {
        exps.push_back(a);
        heights.push_back(rationalize(-phi.cAlpha));
    }
    auto sd = regular_subdivision(exps, heights);
    auto nu = assemble_nu(p, rep, phis, sd);
    REQUIRE(nu.entries.size() == 3);
    for (const auto& [e, v] : nu.entries) {
        CHECK(v.kind == NuKind::orderImage);
        CHECK(v.nu1 == 0.0);  // exact: -log|1|
        CHECK(v.nu2 == 0.0);  // exact: arg(1)
    }
    auto lift = nu.to_lifting();
    CHECK(lift.height_of({1, 0}) == 0.0);
}

TEST_CASE("deformation and tilde families") {
    auto p = parse_polynomial("1+z+w");
    std::vector<double> lo, hi;
    default_search_box(p, lo, hi, 5.0);
    auto rep = order_map_report(p, lo, hi);
    PhiOptions phiOpts;
    phiOpts.samples = 20000;
    std::map<Exponent, PhiEstimate> phis;
    for (const auto& c : rep.components)
        phis[c.order] = phi_alpha(p, c.order, c.representative, phiOpts);
    std::vector<Exponent> exps;
    std::vector<Rat> heights;
    for (const auto& [a, phi] : phis) {
        exps.push_back(a);
        heights.push_back(rationalize(-phi.cAlpha));
    }
    auto sd = regular_subdivision(exps, heights);
    auto nu = assemble_nu(p, rep, phis, sd);

    double invE = std::exp(-1.0);
    auto same = deformation_family(p, nu, invE);
    CHECK(to_string(same) == to_string(p));

    auto ft = deformation_family(p, nu, 0.2);
    REQUIRE(ft.terms.size() == 3);  // nu1 = 0 everywhere: coefficients unchanged
    for (const auto& t : ft.terms) CHECK(std::abs(t.coeff - Cplx(1, 0)) < 1e-12);

    auto tu = tilde_family(p, nu, invE);
    for (const auto& t : tu.terms) CHECK(std::abs(t.coeff - Cplx(1, 0)) < 1e-12);
    auto t0 = tilde_family(p, nu, 0.05);
    CHECK(t0.terms.size() == 3);

    CHECK_THROWS_AS(deformation_family(p, nu, 0.9), error);
    CHECK_THROWS_AS(tilde_family(p, nu, -0.1), error);
}
