#pragma once

#include <coam/amoeba.hpp>
#include <coam/polytope.hpp>
#include <coam/subdivision.hpp>

#include <set>
#include <sstream>

namespace coam {

/// A codual hyperplane <g, theta> = c on the torus, g = alpha - beta kept
/// non-primitive: content(g) counts how many parallel primitive tori it
/// denotes. Weight is the number of subdivision edges merged into it.
struct CodualHyperplane {
    IntVec direction;
    double offset = 0;  // in [0, 2pi)
    long long weight = 1;
    bool effective = false;
    std::vector<std::pair<Exponent, Exponent>> sourceEdges;
    // (incident cell id, outward primitive normals of the polytope facets
    // containing the edge), one entry per boundary source edge
    std::vector<std::pair<std::size_t, std::vector<IntVec>>> frames;
};

/// The hyperplane codual to the edge (alpha, beta) with the given phase
/// lift: <alpha - beta, theta> = pi - phase(alpha) + phase(beta). The stored
/// direction has its first nonzero entry positive; flipping negates the
/// offset. Independent of the order the ends are passed in.
inline CodualHyperplane codual_hyperplane(const Exponent& alpha, const Exponent& beta,
                                          double phaseAlpha, double phaseBeta) {
    if (alpha.size() != beta.size()) throw error("codual_hyperplane: arity mismatch");
    IntVec g(alpha.size());
    bool zero = true;
    for (std::size_t j = 0; j < g.size(); ++j) {
        g[j] = alpha[j] - beta[j];
        zero &= (g[j] == 0);
    }
    if (zero) throw error("codual_hyperplane: coincident ends");
    double off = kPi - phaseAlpha + phaseBeta;
    for (long long v : g) {
        if (v > 0) break;
        if (v < 0) {
            for (auto& w : g) w = -w;
            off = -off;
            break;
        }
    }
    CodualHyperplane h;
    h.direction = g;
    h.offset = wrap_angle(off);
    h.sourceEdges.push_back({alpha, beta});
    return h;
}

struct ShellArrangement {
    int n = 0;
    std::vector<CodualHyperplane> hyperplanes;
    RegularSubdivision subdivision;
    Lifting lift;
    std::vector<std::string> warnings;

    long long totalWeight() const {
        long long s = 0;
        for (const auto& h : hyperplanes) s += h.weight;
        return s;
    }
};

/// Assemble the shell: one codual hyperplane per subdivision edge, merged
/// when direction and offset coincide. Offsets within mergeTol merge
/// silently; within looseTol they merge with a warning. The total weight
/// always equals the number of subdivision edges.
inline ShellArrangement build_shell(const RegularSubdivision& sd, const Lifting& lift,
                                    double mergeTol = 1e-9, double looseTol = 1e-3) {
    ShellArrangement sh;
    sh.n = sd.n;
    sh.subdivision = sd;
    sh.lift = lift;
    if (sd.edges.empty()) throw error("build_shell: subdivision has no edges");

    NewtonPolytope np;
    bool haveNp = true;
    try {
        np = newton_polytope(sd.points);
    } catch (const degenerate_error&) {
        haveNp = false;
    }

    for (const auto& e : sd.edges) {
        CodualHyperplane h = codual_hyperplane(e.a, e.b, lift.phase_of(e.a), lift.phase_of(e.b));
        if (e.cells.size() == 1 && haveNp && !np.degenerate) {
            std::vector<IntVec> normals;
            for (const auto& fc : np.facets)
                if (idot(fc.normal, e.a) == fc.offset && idot(fc.normal, e.b) == fc.offset) {
                    IntVec out = fc.normal;
                    for (auto& v : out) v = -v;
                    normals.push_back(out);
                }
            std::sort(normals.begin(), normals.end());
            if (!normals.empty()) h.frames.push_back({e.cells[0], normals});
        }
        bool merged = false;
        for (auto& g : sh.hyperplanes) {
            if (g.direction != h.direction) continue;
            double d = std::abs(wrap_signed(g.offset - h.offset));
            if (d > looseTol) continue;
            if (d > mergeTol)
                sh.warnings.push_back("merged near-coincident codual hyperplanes at loose tolerance");
            g.weight += 1;
            g.sourceEdges.push_back(h.sourceEdges.front());
            for (auto& fr : h.frames) g.frames.push_back(fr);
            merged = true;
            break;
        }
        if (!merged) sh.hyperplanes.push_back(std::move(h));
    }
    return sh;
}

/// Paper classes of a coefficient given its vanishing and order-image status.
enum class CoeffClass { effectivelyNonzero, virtuallyNonzero, virtuallyZero, effectivelyZero };

inline CoeffClass classify_coefficient(bool coeffNonzero, bool inOrderImage) {
    if (coeffNonzero)
        return inOrderImage ? CoeffClass::effectivelyNonzero : CoeffClass::virtuallyNonzero;
    return inOrderImage ? CoeffClass::virtuallyZero : CoeffClass::effectivelyZero;
}

inline CoeffClass classify_coefficient(const LaurentPolynomial& p,
                                       const std::vector<Exponent>& imOrd, const Exponent& a) {
    bool nz = p.coeff(a) != nullptr;
    bool im = std::find(imOrd.begin(), imOrd.end(), a) != imOrd.end();
    return classify_coefficient(nz, im);
}

struct EdgeClass {
    bool effective = false;
    CoeffClass aClass, bClass;
};

/// An edge is effective when both ends lie in supp(f) intersected with the
/// subdivision's vertex set. A hyperplane is flagged effective when all of
/// its source edges are.
inline std::map<std::pair<Exponent, Exponent>, EdgeClass> classify_edges(
    ShellArrangement& sh, const std::vector<Exponent>& supp, const std::vector<Exponent>& imOrd) {
    std::vector<Exponent> verts = sh.subdivision.vertex_set();
    auto inSupp = [&](const Exponent& a) {
        return std::find(supp.begin(), supp.end(), a) != supp.end();
    };
    auto inIm = [&](const Exponent& a) {
        return std::find(imOrd.begin(), imOrd.end(), a) != imOrd.end();
    };
    std::map<std::pair<Exponent, Exponent>, EdgeClass> out;
    for (auto& h : sh.hyperplanes) {
        bool all = true;
        for (const auto& [a, b] : h.sourceEdges) {
            EdgeClass ec;
            bool av = std::binary_search(verts.begin(), verts.end(), a);
            bool bv = std::binary_search(verts.begin(), verts.end(), b);
            ec.effective = av && bv && inSupp(a) && inSupp(b);
            ec.aClass = classify_coefficient(inSupp(a), inIm(a));
            ec.bClass = classify_coefficient(inSupp(b), inIm(b));
            out[{a, b}] = ec;
            all &= ec.effective;
        }
        h.effective = all;
    }
    return out;
}

/// Restriction of the shell to the hyperplanes codual to at least one edge
/// incident to beta. Merged weights and source lists are kept whole.
inline ShellArrangement sub_arrangement(const ShellArrangement& sh, const Exponent& beta) {
    if (!sh.subdivision.is_vertex(beta))
        throw error("sub_arrangement: beta is not a subdivision vertex");
    ShellArrangement out;
    out.n = sh.n;
    out.subdivision = sh.subdivision;
    out.lift = sh.lift;
    for (const auto& h : sh.hyperplanes) {
        bool incident = false;
        for (const auto& [a, b] : h.sourceEdges) incident |= (a == beta || b == beta);
        if (incident) out.hyperplanes.push_back(h);
    }
    return out;
}

namespace detail {

/// Bezout coefficients: returns (g, u, v) with a u + b v = g = gcd(a, b).
inline std::array<long long, 3> ext_gcd(long long a, long long b) {
    long long r0 = a, r1 = b, u0 = 1, u1 = 0, v0 = 0, v1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(u0, u1) = std::make_pair(u1, u0 - q * u1);
        std::tie(v0, v1) = std::make_pair(v1, v0 - q * v1);
    }
    if (r0 < 0) {
        r0 = -r0;
        u0 = -u0;
        v0 = -v0;
    }
    return {r0, u0, v0};
}

struct TorusLine {
    std::size_t hyperplane;
    IntVec dir0;       // primitive direction of the normal g
    IntVec tangent;    // perp(dir0): traversal direction, closes after 2pi
    double c;          // <dir0, x> = c mod 2pi
    std::vector<double> x0;  // a point on the line
};

/// Expand hyperplanes into the primitive torus lines they denote:
/// <m g0, x> = c splits into m parallel lines <g0, x> = (c + 2 pi k)/m.
inline std::vector<TorusLine> torus_lines(const ShellArrangement& sh) {
    if (sh.n != 2) throw error("torus lines: n = 2 only");
    std::vector<TorusLine> lines;
    for (std::size_t hi = 0; hi < sh.hyperplanes.size(); ++hi) {
        const auto& h = sh.hyperplanes[hi];
        long long m = content(h.direction);
        IntVec g0 = primitive(h.direction);
        auto [g, u, v] = ext_gcd(g0[0], g0[1]);
        if (g != 1) throw error("torus lines: direction not primitive");
        for (long long k = 0; k < m; ++k) {
            TorusLine L;
            L.hyperplane = hi;
            L.dir0 = g0;
            L.tangent = {-g0[1], g0[0]};
            L.c = wrap_angle((h.offset + kTwoPi * (double)k) / (double)m);
            L.x0 = {L.c * (double)u, L.c * (double)v};
            lines.push_back(L);
        }
    }
    return lines;
}

/// All parameter values s in [0, 2pi) where `other` crosses the line
/// parametrized as x0 + s * tangent; |det| many for transversal pairs.
inline std::vector<double> line_hits(const TorusLine& on, const TorusLine& other) {
    long long D = other.dir0[0] * on.tangent[0] + other.dir0[1] * on.tangent[1];
    if (D == 0) return {};
    double rhs = other.c - (other.dir0[0] * on.x0[0] + other.dir0[1] * on.x0[1]);
    std::vector<double> out;
    long long kc = (long long)std::floor(-rhs / kTwoPi);
    for (long long k = kc - std::abs(D) - 2; k <= kc + std::abs(D) + 2; ++k) {
        double s = (rhs + kTwoPi * (double)k) / (double)D;
        if (s >= -1e-9 && s < kTwoPi - 1e-9) out.push_back(wrap_angle(s));
    }
    return out;
}

}  // namespace detail

/// Canonical hashable form of the incidence structure of the arrangement on
/// T^2: for every primitive line, the cyclic sequence of its intersection
/// points, each labeled by the directions, weights, and effectiveness of all
/// lines through it. Invariant under translations of the torus.
inline std::string combinatorial_type_signature(const ShellArrangement& sh) {
    if (sh.n != 2) throw error("combinatorial_type_signature: n = 2 only");
    auto lines = detail::torus_lines(sh);
    std::size_t L = lines.size();

    auto lineTag = [&](std::size_t li) {
        const auto& h = sh.hyperplanes[lines[li].hyperplane];
        std::ostringstream os;
        os << "(" << h.direction[0] << "," << h.direction[1] << ";w" << h.weight
           << (h.effective ? ";e" : ";v") << ")";
        return os.str();
    };

    // intersections[li] = (parameter s along the line, other line index)
    std::vector<std::vector<std::pair<double, std::size_t>>> hits(L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
            if (i == j) continue;
            for (double s : detail::line_hits(lines[i], lines[j])) hits[i].push_back({s, j});
        }

    std::vector<std::string> descriptors;
    for (std::size_t i = 0; i < L; ++i) {
        auto& hv = hits[i];
        std::sort(hv.begin(), hv.end());
        // cluster coincident parameters into points
        std::vector<std::string> labels;
        std::size_t a = 0;
        while (a < hv.size()) {
            std::size_t b = a + 1;
            while (b < hv.size() && hv[b].first - hv[a].first < 1e-7) ++b;
            std::set<std::string> through{lineTag(i)};
            for (std::size_t t = a; t < b; ++t) through.insert(lineTag(hv[t].second));
            std::string lab = "{";
            for (const auto& s : through) lab += s;
            lab += "}";
            labels.push_back(lab);
            a = b;
        }
        // first and last cluster may be the same point across the wrap
        if (labels.size() > 1 && !hv.empty() &&
            (hv.front().first + kTwoPi - hv.back().first) < 1e-7) {
            labels.front() = std::min(labels.front(), labels.back());
            labels.pop_back();
        }
        // canonical rotation: lexicographically smallest
        std::string bestRot;
        for (std::size_t r = 0; r < std::max<std::size_t>(labels.size(), 1); ++r) {
            std::string cand = lineTag(i) + ":";
            for (std::size_t t = 0; t < labels.size(); ++t)
                cand += labels[(r + t) % labels.size()];
            if (bestRot.empty() || cand < bestRot) bestRot = cand;
        }
        if (labels.empty()) bestRot = lineTag(i) + ":{}";
        descriptors.push_back(bestRot);
    }
    std::sort(descriptors.begin(), descriptors.end());
    std::string sig;
    for (const auto& d : descriptors) sig += d + "|";
    return sig;
}

struct ShellBalanceReport {
    std::size_t crossings = 0;
    bool balanced = true;
};

/// Experimental balancing check. A closed torus line continues through every
/// crossing, so its two opposite rays there carry the line's weight and the
/// weighted primitive directions cancel pairwise: the vertex sum is zero
/// exactly. The computational content is verifying each incident line really
/// passes through its recorded crossing (its defining congruence holds).
inline ShellBalanceReport shell_balancing(const ShellArrangement& sh) {
    ShellBalanceReport rep;
    if (sh.n != 2) return rep;
    auto lines = detail::torus_lines(sh);
    std::vector<std::array<double, 2>> pts;
    std::vector<std::set<std::size_t>> through;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            for (double s : detail::line_hits(lines[i], lines[j])) {
                double px = wrap_angle(lines[i].x0[0] + s * lines[i].tangent[0]);
                double py = wrap_angle(lines[i].x0[1] + s * lines[i].tangent[1]);
                std::size_t at = pts.size();
                for (std::size_t q = 0; q < pts.size(); ++q)
                    if (std::abs(wrap_signed(pts[q][0] - px)) < 1e-7 &&
                        std::abs(wrap_signed(pts[q][1] - py)) < 1e-7)
                        at = q;
                if (at == pts.size()) {
                    pts.push_back({px, py});
                    through.push_back({});
                }
                through[at].insert(i);
                through[at].insert(j);
            }
    rep.crossings = pts.size();
    for (std::size_t q = 0; q < pts.size(); ++q)
        for (std::size_t li : through[q]) {
            double resid = wrap_signed(lines[li].dir0[0] * pts[q][0] +
                                       lines[li].dir0[1] * pts[q][1] - lines[li].c);
            if (std::abs(resid) > 1e-6) rep.balanced = false;
        }
    return rep;
}

struct WeightTwoOptions {
    std::vector<double> sweep;  // descending t values; default log-spaced in (0, 1/e)
    OrderMapOptions orderMap;
    long long phiSamples = 50000;
    std::uint64_t seed = 42;
    Rat forceDelta = Rat(1, 1024);
};

struct WeightTwoReport {
    Exponent beta;
    double tMax = 0;
    std::vector<double> sweep;
    std::vector<bool> componentPresent;  // parallel to sweep
    ShellArrangement subArrangement;     // beta-incident hyperplanes at tMax
    bool allWeightsAtLeastTwo = false;
    std::string signature;  // n = 2 only
    std::vector<std::string> notes;
};

namespace detail {

/// Measured tropical data of f over a search box: order map, Phi estimates,
/// the dual subdivision of the measured spine, and the assembled nu.
struct MeasuredNu {
    OrderMapReport report;
    std::map<Exponent, PhiEstimate> phis;
    RegularSubdivision sd;
    NuAssignment nu;
};

inline MeasuredNu measure_nu(const LaurentPolynomial& p, const std::vector<double>& lo,
                             const std::vector<double>& hi, const OrderMapOptions& om,
                             long long phiSamples, std::uint64_t seed) {
    MeasuredNu m;
    m.report = order_map_report(p, lo, hi, om);
    if (m.report.imageOfOrder.size() < 2)
        throw numeric_error("measure_nu: fewer than two orders found");
    PhiOptions po;
    po.samples = phiSamples;
    po.seed = seed;
    std::vector<Exponent> es;
    std::vector<double> hs;
    for (const auto& c : m.report.components) {
        m.phis[c.order] = phi_alpha(p, c.order, c.representative, po);
        es.push_back(c.order);
        hs.push_back(-m.phis[c.order].cAlpha);
    }
    m.sd = regular_subdivision(es, hs);
    m.nu = assemble_nu(p, m.report, m.phis, m.sd);
    return m;
}

/// Does the amoeba complement of p have a component of order beta? Exact
/// modulus gaps for n = 1; guided search plus dual-vertex probing otherwise.
inline bool component_present(const LaurentPolynomial& p, const Exponent& beta,
                              const std::vector<double>& lo, const std::vector<double>& hi,
                              const OrderOptions& oo) {
    if (find_order_witness(p, beta, lo, hi, oo)) return true;
    if (p.n == 1 || p.coeff(beta)) return false;
    // beta carries no coefficient: probe the dual vertex of the cell of the
    // coefficient subdivision containing beta, plus a jitter ring
    std::vector<Exponent> es;
    std::vector<double> hs;
    for (const auto& t : p.terms) {
        es.push_back(t.exp);
        hs.push_back(-std::log(std::abs(t.coeff)));
    }
    RegularSubdivision sd;
    try {
        sd = regular_subdivision(es, hs);
    } catch (const error&) {
        return false;
    }
    for (const auto& cell : sd.cells) {
        Rat v = cell.offset;
        for (int j = 0; j < sd.n; ++j) v += cell.grad[j] * Rat(beta[j]);
        if (v != envelope_value(sd, beta)) continue;  // beta not over this cell
        std::vector<double> x0(sd.n);
        for (int j = 0; j < sd.n; ++j) x0[j] = rat_to_double(cell.grad[j]);
        for (double r : {0.0, 0.05, 0.2}) {
            for (int dir = 0; dir < (r == 0.0 ? 1 : 8); ++dir) {
                std::vector<double> x = x0;
                if (r > 0 && sd.n >= 2) {
                    x[0] += r * std::cos(kTwoPi * dir / 8);
                    x[1] += r * std::sin(kTwoPi * dir / 8);
                } else if (r > 0) {
                    x[0] += dir % 2 ? r : -r;
                }
                if (auto o = order_at_point(p, x, oo); o && *o == beta) return true;
            }
        }
    }
    return false;
}

}  // namespace detail

/// Default search box in log space: the bounding box of the spine vertices of
/// the coefficient tropical polynomial, padded by margin on every side.
inline void default_search_box(const LaurentPolynomial& p, std::vector<double>& lo,
                               std::vector<double>& hi, double margin = 5.0) {
    lo.assign(p.n, 0.0);
    hi.assign(p.n, 0.0);
    std::vector<Exponent> es;
    std::vector<Rat> cs;
    for (const auto& t : p.terms) {
        es.push_back(t.exp);
        cs.push_back(rationalize(std::log(std::abs(t.coeff))));
    }
    try {
        auto tc = corner_locus(make_tropical(es, cs));
        for (const auto& v : tc.vertices)
            for (int j = 0; j < p.n; ++j) {
                lo[j] = std::min(lo[j], rat_to_double(v.pos[j]));
                hi[j] = std::max(hi[j], rat_to_double(v.pos[j]));
            }
    } catch (const error&) {
        // no corners (e.g. degenerate data): keep the origin-centered default
    }
    for (int j = 0; j < p.n; ++j) {
        lo[j] -= margin;
        hi[j] += margin;
    }
}

/// Probe the weight-two phenomenon at beta: sweep the deformation family
/// downward in t, find the largest t at which the complement component of
/// order beta is absent, and build the beta-incident sub-arrangement of the
/// shell there, forcing beta into the subdivision as an extra vertex with
/// phase 0. Requires beta outside supp(f), and either beta in Im(ord) or a
/// type I certificate.
inline WeightTwoReport weight_two_diagnostic(const LaurentPolynomial& p, const Exponent& beta,
                                             const WeightTwoOptions& opts = {}) {
    if ((int)beta.size() != p.n) throw error("weight_two_diagnostic: arity mismatch");
    if (p.coeff(beta)) throw error("weight_two_diagnostic: beta must lie outside supp(f)");
    WeightTwoReport rep;
    rep.beta = beta;

    std::vector<double> lo, hi;
    default_search_box(p, lo, hi);
    OrderMapOptions om = opts.orderMap;

    auto base = detail::measure_nu(p, lo, hi, om, opts.phiSamples, opts.seed);
    bool inImage = std::binary_search(base.report.imageOfOrder.begin(),
                                      base.report.imageOfOrder.end(), beta);
    if (!inImage) {
        ClassifyOptions co;
        co.boxLo = lo;
        co.boxHi = hi;
        co.seed = opts.seed;
        auto ty = classify_index_type(p, beta, co);
        if (!ty.typeI)
            throw error("weight_two_diagnostic: beta is neither in the order image nor type I");
        rep.notes.push_back("beta enters through a type I certificate");
    }

    rep.sweep = opts.sweep;
    if (rep.sweep.empty()) {
        double tLo = 0.02, tHi = 0.95 / std::exp(1.0);
        for (int i = 0; i < 12; ++i)
            rep.sweep.push_back(std::exp(std::log(tHi) +
                                         (std::log(tLo) - std::log(tHi)) * i / 11.0));
    }

    std::optional<double> tMax;
    for (double t : rep.sweep) {
        LaurentPolynomial ft = deformation_family(p, base.nu, t);
        bool present = detail::component_present(ft, beta, lo, hi, om.order);
        rep.componentPresent.push_back(present);
        if (!present && !tMax) tMax = t;  // sweep is descending: first absent = largest
    }
    if (!tMax) {
        rep.notes.push_back("component persisted through the sweep; arrangement taken at the smallest t");
        tMax = rep.sweep.back();
    }
    rep.tMax = *tMax;

    LaurentPolynomial fstar = deformation_family(p, base.nu, rep.tMax);
    auto star = detail::measure_nu(fstar, lo, hi, om, opts.phiSamples, opts.seed);
    RegularSubdivision sd = star.sd;
    Lifting lift = star.nu.to_lifting();
    if (!sd.is_vertex(beta)) {
        sd = force_split(sd, beta, opts.forceDelta);
        lift.entries[beta] = {rat_to_double(envelope_value(star.sd, beta)) -
                                  rat_to_double(opts.forceDelta),
                              0.0};
        rep.notes.push_back("beta forced into the subdivision as an extra vertex");
    } else if (!lift.entries.count(beta)) {
        lift.entries[beta] = {rat_to_double(envelope_value(star.sd, beta)), 0.0};
    }
    for (const auto& v : sd.vertex_set())
        if (!lift.entries.count(v)) lift.entries[v] = {rat_to_double(envelope_value(sd, v)), 0.0};

    ShellArrangement full = build_shell(sd, lift);
    classify_edges(full, fstar.support(), star.report.imageOfOrder);
    rep.subArrangement = sub_arrangement(full, beta);
    rep.allWeightsAtLeastTwo = !rep.subArrangement.hyperplanes.empty();
    for (const auto& h : rep.subArrangement.hyperplanes)
        rep.allWeightsAtLeastTwo &= (h.weight >= 2);
    if (p.n == 2) rep.signature = combinatorial_type_signature(rep.subArrangement);
    return rep;
}

}  // namespace coam
