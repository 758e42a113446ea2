#pragma once

#include <coam/jsonw.hpp>
#include <coam/raster.hpp>
#include <coam/tropical.hpp>

namespace coam {

struct AnalyzeOptions {
    int grid = 512;
    long long samples = 200000;
    std::uint64_t seed = 42;
    long long phiSamples = 200000;
    bool sampleCoamoeba = true;  // n = 2 raster pipeline
    bool runDiagnostics = true;  // weight-two reports for Im(ord) minus supp
    double boxMargin = 5.0;
    std::vector<double> boxLo, boxHi;  // override the automatic search box
    OrderMapOptions orderMap;
    ClassifyOptions classify;  // typing of support points outside Im(ord)
};

struct BoundCheck {
    std::string name;
    double value = 0;
    double bound = 0;
    bool pass = false;
};

struct CoamoebaBlock {
    bool sampled = false;
    long long grid = 0, samples = 0, failures = 0;
    ComponentReport components;
    AreaEstimate area;
    double areaBound = 0;  // 2 pi^2 Area(Delta)
    ExtraPieceReport extras;
    ShellPositionReport positions;
    bool simplexExact = false;  // fast path ran
    long long simplexComponentCount = 0;
};

struct AnalysisReport {
    LaurentPolynomial poly;
    std::string echo;
    std::string hashHex;
    NewtonPolytope polytope;
    long long normalizedVolume = 0;
    bool maximallySparse = false;
    std::vector<double> boxLo, boxHi;

    OrderMapReport orders;
    std::map<Exponent, PhiEstimate> phis;
    NuAssignment nu;
    RegularSubdivision subdivision;
    TropicalComplex spine;
    bool spineBalanced = false;
    ShellArrangement shell;
    std::map<std::pair<Exponent, Exponent>, EdgeClass> edgeClasses;

    TorusRaster raster;  // populated when the coamoeba block is sampled
    CoamoebaBlock coamoeba;
    std::vector<WeightTwoReport> diagnostics;

    std::vector<BoundCheck> bounds;
    bool boundsPass = true;
    std::vector<std::string> warnings;
    AnalyzeOptions params;
};

/// Full pipeline: order map, Phi estimates, nu assembly, spine, shell,
/// sampled coamoeba statistics, and the paper-style bound checks.
inline AnalysisReport analyze(const LaurentPolynomial& p, const AnalyzeOptions& opts = {}) {
    AnalysisReport rep;
    rep.poly = p;
    rep.params = opts;
    rep.echo = to_string(p);
    rep.hashHex = poly_hash(p);

    rep.polytope = newton_polytope(p);
    if (rep.polytope.degenerate)
        throw degenerate_error("analyze: support does not span the variable space");
    rep.normalizedVolume = (long long)normalized_volume(rep.polytope);
    {
        std::vector<Exponent> supp = p.support();
        std::sort(supp.begin(), supp.end());
        std::vector<Exponent> verts = rep.polytope.vertices;
        std::sort(verts.begin(), verts.end());
        rep.maximallySparse = supp == verts;
    }

    rep.boxLo = opts.boxLo;
    rep.boxHi = opts.boxHi;
    if ((int)rep.boxLo.size() != p.n || (int)rep.boxHi.size() != p.n)
        default_search_box(p, rep.boxLo, rep.boxHi, opts.boxMargin);

    rep.orders = order_map_report(p, rep.boxLo, rep.boxHi, opts.orderMap);
    if (rep.orders.imageOfOrder.size() < 2)
        throw numeric_error("analyze: fewer than two complement orders found");
    PhiOptions po;
    po.samples = opts.phiSamples;
    po.seed = opts.seed;
    std::vector<Exponent> es;
    std::vector<double> hs;
    for (const auto& c : rep.orders.components) {
        rep.phis[c.order] = phi_alpha(p, c.order, c.representative, po);
        es.push_back(c.order);
        hs.push_back(-rep.phis[c.order].cAlpha);
    }
    RegularSubdivision measuredSd = regular_subdivision(es, hs);
    AssembleOptions aopts;
    aopts.classify = opts.classify;
    rep.nu = assemble_nu(p, rep.orders, rep.phis, measuredSd, aopts);

    {
        std::vector<double> cs;
        for (const auto& o : rep.orders.imageOfOrder) cs.push_back(-rep.nu.entries.at(o).nu1);
        rep.spine = spine_from_phi(rep.orders.imageOfOrder, cs);
        rep.spineBalanced = check_balancing(rep.spine);
        rep.subdivision = rep.spine.dual;  // the shell lives on the spine's dual
    }

    rep.shell = build_shell(rep.subdivision, rep.nu.to_lifting());
    rep.edgeClasses = classify_edges(rep.shell, p.support(), rep.orders.imageOfOrder);

    if (p.n == 2 && opts.sampleCoamoeba) {
        SampleOptions so;
        so.samples = opts.samples;
        so.seed = opts.seed;
        so.grid = opts.grid;
        so.xLo = rep.boxLo;
        so.xHi = rep.boxHi;
        rep.raster = sample_coamoeba(p, so);
        rep.coamoeba.sampled = true;
        rep.coamoeba.grid = opts.grid;
        rep.coamoeba.samples = opts.samples;
        rep.coamoeba.failures = rep.raster.failures;
        rep.coamoeba.components = complement_components(rep.raster, rep.normalizedVolume);
        rep.coamoeba.area = coamoeba_area(rep.raster);
        rep.coamoeba.areaBound = kPi * kPi * (double)rep.normalizedVolume;  // 2 pi^2 Area
        rep.coamoeba.extras = extra_pieces(rep.raster, rep.shell);
        rep.coamoeba.positions = shell_position(rep.shell, rep.raster);

        rep.bounds.push_back({"complementComponents", (double)rep.coamoeba.components.componentCount,
                              (double)rep.normalizedVolume, rep.coamoeba.components.withinBound});
        rep.bounds.push_back({"areaWithMultiplicity", rep.coamoeba.area.areaWithMultiplicity,
                              rep.coamoeba.areaBound,
                              rep.coamoeba.area.areaWithMultiplicity <=
                                  rep.coamoeba.areaBound * 1.02});
        for (const auto& c : rep.coamoeba.components.components)
            rep.bounds.push_back(
                {"convexityDefect", c.convexityDefect, 0.02, c.convexityDefect <= 0.02});

        try {
            auto sc = simplex_coamoeba(p);
            rep.coamoeba.simplexExact = true;
            rep.coamoeba.simplexComponentCount = sc.componentCount;
        } catch (const error&) {
        }
    }

    if (opts.runDiagnostics && p.n <= 2) {
        std::vector<Exponent> supp = p.support();
        std::sort(supp.begin(), supp.end());
        for (const auto& o : rep.orders.imageOfOrder) {
            if (std::binary_search(supp.begin(), supp.end(), o)) continue;
            WeightTwoOptions wo;
            wo.seed = opts.seed;
            try {
                rep.diagnostics.push_back(weight_two_diagnostic(p, o, wo));
            } catch (const error& e) {
                rep.warnings.push_back(std::string("weight-two diagnostic failed: ") + e.what());
            }
        }
    }

    for (const auto& w : rep.orders.warnings) rep.warnings.push_back(w);
    for (const auto& w : rep.nu.warnings) rep.warnings.push_back(w);
    for (const auto& w : rep.shell.warnings) rep.warnings.push_back(w);
    for (const auto& b : rep.bounds) rep.boundsPass &= b.pass;
    return rep;
}

namespace detail {

inline jsonw::Value exp_json(const Exponent& e) {
    auto v = jsonw::Value::array();
    for (long long x : e) v.push(x);
    return v;
}

inline jsonw::Value vecd_json(const std::vector<double>& xs) {
    auto v = jsonw::Value::array();
    for (double x : xs) v.push(x);
    return v;
}

inline const char* kind_name(NuKind k) {
    switch (k) {
        case NuKind::orderImage: return "orderImage";
        case NuKind::typeOne: return "typeI";
        default: return "typeII";
    }
}

inline const char* class_name(CoeffClass c) {
    switch (c) {
        case CoeffClass::effectivelyNonzero: return "effectivelyNonzero";
        case CoeffClass::virtuallyNonzero: return "virtuallyNonzero";
        case CoeffClass::virtuallyZero: return "virtuallyZero";
        default: return "effectivelyZero";
    }
}

inline jsonw::Value shell_json(const ShellArrangement& sh) {
    auto v = jsonw::Value::object();
    auto hs = jsonw::Value::array();
    for (const auto& h : sh.hyperplanes) {
        auto o = jsonw::Value::object();
        auto dir = jsonw::Value::array();
        for (long long d : h.direction) dir.push(d);
        o.set("direction", std::move(dir));
        o.set("offset", h.offset);
        o.set("weight", h.weight);
        o.set("effective", h.effective);
        auto se = jsonw::Value::array();
        for (const auto& [a, b] : h.sourceEdges) {
            auto e = jsonw::Value::array();
            e.push(exp_json(a));
            e.push(exp_json(b));
            se.push(std::move(e));
        }
        o.set("sourceEdges", std::move(se));
        o.set("framed", !h.frames.empty());
        hs.push(std::move(o));
    }
    v.set("hyperplanes", std::move(hs));
    v.set("totalWeight", sh.totalWeight());
    return v;
}

}  // namespace detail

inline jsonw::Value to_json(const AnalysisReport& r) {
    using jsonw::Value;
    auto root = Value::object();
    root.set("schema", "coam-report/1");

    auto poly = Value::object();
    poly.set("echo", r.echo);
    poly.set("hash", r.hashHex);
    poly.set("n", r.poly.n);
    auto terms = Value::array();
    for (const auto& t : r.poly.terms) {
        auto o = Value::object();
        o.set("exp", detail::exp_json(t.exp));
        o.set("re", t.coeff.real());
        o.set("im", t.coeff.imag());
        terms.push(std::move(o));
    }
    poly.set("terms", std::move(terms));
    root.set("polynomial", std::move(poly));

    auto np = Value::object();
    auto verts = Value::array();
    for (const auto& v : r.polytope.vertices) verts.push(detail::exp_json(v));
    np.set("vertices", std::move(verts));
    np.set("latticePointCount", r.polytope.latticePoints.size());
    np.set("normalizedVolume", r.normalizedVolume);
    np.set("maximallySparse", r.maximallySparse);
    root.set("newtonPolytope", std::move(np));

    auto box = Value::object();
    box.set("lo", detail::vecd_json(r.boxLo));
    box.set("hi", detail::vecd_json(r.boxHi));
    root.set("searchBox", std::move(box));

    auto om = Value::object();
    auto image = Value::array();
    for (const auto& o : r.orders.imageOfOrder) image.push(detail::exp_json(o));
    om.set("imageOfOrder", std::move(image));
    auto comps = Value::array();
    for (const auto& c : r.orders.components) {
        auto o = Value::object();
        o.set("order", detail::exp_json(c.order));
        o.set("representative", detail::vecd_json(c.representative));
        o.set("bounded", c.bounded);
        o.set("lopsidedCertified", c.lopsidedCertified);
        o.set("margin", c.margin);
        comps.push(std::move(o));
    }
    om.set("components", std::move(comps));
    root.set("orderMap", std::move(om));

    auto phis = Value::array();
    for (const auto& [a, e] : r.phis) {
        auto o = Value::object();
        o.set("alpha", detail::exp_json(a));
        o.set("cAlpha", e.cAlpha);
        o.set("imPhase", e.imPhase);
        o.set("stdError", e.stdError);
        o.set("samples", e.samples);
        o.set("gridPerAxis", e.gridPerAxis);
        phis.push(std::move(o));
    }
    root.set("phi", std::move(phis));

    auto nu = Value::array();
    for (const auto& [a, e] : r.nu.entries) {
        auto o = Value::object();
        o.set("alpha", detail::exp_json(a));
        o.set("nu1", e.nu1);
        o.set("nu2", e.nu2);
        o.set("kind", detail::kind_name(e.kind));
        o.set("heuristic", e.heuristic);
        o.set("affineGap", e.affineGap);
        nu.push(std::move(o));
    }
    root.set("nu", std::move(nu));

    auto spine = Value::object();
    auto svs = Value::array();
    for (const auto& v : r.spine.vertices) {
        std::vector<double> pos;
        for (const auto& q : v.pos) pos.push_back(rat_to_double(q));
        svs.push(detail::vecd_json(pos));
    }
    spine.set("vertices", std::move(svs));
    auto ses = Value::array();
    for (const auto& e : r.spine.edges) {
        auto o = Value::object();
        o.set("v0", e.v0);
        o.set("v1", e.v1);
        auto d = Value::array();
        for (long long x : e.dir) d.push(x);
        o.set("dir", std::move(d));
        o.set("weight", e.weight);
        ses.push(std::move(o));
    }
    spine.set("edges", std::move(ses));
    auto srs = Value::array();
    for (const auto& e : r.spine.rays) {
        auto o = Value::object();
        o.set("v0", e.v0);
        auto d = Value::array();
        for (long long x : e.dir) d.push(x);
        o.set("dir", std::move(d));
        o.set("weight", e.weight);
        srs.push(std::move(o));
    }
    spine.set("rays", std::move(srs));
    spine.set("balanced", r.spineBalanced);
    root.set("spine", std::move(spine));

    auto sd = Value::object();
    auto cells = Value::array();
    for (const auto& c : r.subdivision.cells) {
        auto pts = Value::array();
        for (const auto& q : c.points) pts.push(detail::exp_json(q));
        cells.push(std::move(pts));
    }
    sd.set("cells", std::move(cells));
    sd.set("edgeCount", r.subdivision.edges.size());
    root.set("subdivision", std::move(sd));

    root.set("shell", detail::shell_json(r.shell));

    auto ecs = Value::array();
    for (const auto& [key, ec] : r.edgeClasses) {
        auto o = Value::object();
        o.set("a", detail::exp_json(key.first));
        o.set("b", detail::exp_json(key.second));
        o.set("effective", ec.effective);
        o.set("aClass", detail::class_name(ec.aClass));
        o.set("bClass", detail::class_name(ec.bClass));
        ecs.push(std::move(o));
    }
    root.set("edges", std::move(ecs));

    auto co = Value::object();
    co.set("sampled", r.coamoeba.sampled);
    if (r.coamoeba.sampled) {
        co.set("grid", r.coamoeba.grid);
        co.set("samples", r.coamoeba.samples);
        co.set("failures", r.coamoeba.failures);
        co.set("componentCount", r.coamoeba.components.componentCount);
        co.set("bound", r.coamoeba.components.bound);
        co.set("withinBound", r.coamoeba.components.withinBound);
        co.set("analysisGrid", r.coamoeba.components.grid);
        auto cs = Value::array();
        for (const auto& c : r.coamoeba.components.components) {
            auto o = Value::object();
            o.set("pixels", c.pixels);
            o.set("representative",
                  detail::vecd_json({c.representative[0], c.representative[1]}));
            o.set("convexityDefect", c.convexityDefect);
            o.set("wraps", c.wraps);
            cs.push(std::move(o));
        }
        co.set("components", std::move(cs));
        co.set("plainArea", r.coamoeba.area.plainArea);
        co.set("areaWithMultiplicity", r.coamoeba.area.areaWithMultiplicity);
        co.set("areaBound", r.coamoeba.areaBound);
        auto xp = Value::object();
        xp.set("present", r.coamoeba.extras.present);
        xp.set("extraArea", r.coamoeba.extras.extraArea);
        xp.set("pieceCount", r.coamoeba.extras.pieces.size());
        xp.set("analysisGrid", r.coamoeba.extras.grid);
        co.set("extraPieces", std::move(xp));
        auto sp = Value::array();
        for (const auto& e : r.coamoeba.positions.entries) {
            auto o = Value::object();
            o.set("hyperplane", e.hyperplane);
            o.set("margin", e.margin);
            o.set("side", e.side);
            o.set("ambiguous", e.ambiguous);
            sp.push(std::move(o));
        }
        co.set("shellPosition", std::move(sp));
        if (r.coamoeba.simplexExact) {
            auto sx = Value::object();
            sx.set("componentCount", r.coamoeba.simplexComponentCount);
            co.set("simplexExact", std::move(sx));
        }
    }
    root.set("coamoeba", std::move(co));

    auto diags = Value::array();
    for (const auto& d : r.diagnostics) {
        auto o = Value::object();
        o.set("beta", detail::exp_json(d.beta));
        o.set("tMax", d.tMax);
        o.set("sweep", detail::vecd_json(d.sweep));
        auto present = Value::array();
        for (bool b : d.componentPresent) present.push(b);
        o.set("componentPresent", std::move(present));
        o.set("subArrangement", detail::shell_json(d.subArrangement));
        o.set("allWeightsAtLeastTwo", d.allWeightsAtLeastTwo);
        o.set("signature", d.signature);
        auto notes = Value::array();
        for (const auto& s : d.notes) notes.push(s);
        o.set("notes", std::move(notes));
        diags.push(std::move(o));
    }
    root.set("diagnostics", std::move(diags));

    auto bounds = Value::array();
    for (const auto& b : r.bounds) {
        auto o = Value::object();
        o.set("name", b.name);
        o.set("value", b.value);
        o.set("bound", b.bound);
        o.set("pass", b.pass);
        bounds.push(std::move(o));
    }
    root.set("bounds", std::move(bounds));
    root.set("boundsPass", r.boundsPass);

    auto params = Value::object();
    params.set("grid", r.params.grid);
    params.set("samples", r.params.samples);
    params.set("seed", (long long)r.params.seed);
    params.set("phiSamples", r.params.phiSamples);
    params.set("orderGridPerAxis", r.params.orderMap.gridPerAxis);
    params.set("orderFibers", r.params.orderMap.order.fibers);
    root.set("parameters", std::move(params));

    auto warns = Value::array();
    for (const auto& w : r.warnings) warns.push(w);
    root.set("warnings", std::move(warns));
    return root;
}

}  // namespace coam
