#pragma once

#include "coam/subdivision.hpp"

namespace coam {

/// Max-plus polynomial x -> max_alpha { c_alpha + <alpha, x> } with exact
/// rational coefficients.
struct TropicalPolynomial {
    int n = 0;
    std::vector<Exponent> exps;
    std::vector<Rat> coeffs;  // parallel to exps
};

inline TropicalPolynomial make_tropical(std::vector<Exponent> exps, std::vector<Rat> coeffs) {
    if (exps.empty() || exps.size() != coeffs.size())
        throw error("make_tropical: bad configuration");
    TropicalPolynomial tp;
    tp.n = (int)exps[0].size();
    tp.exps = std::move(exps);
    tp.coeffs = std::move(coeffs);
    return tp;
}

inline Rat tropical_eval(const TropicalPolynomial& tp, const RatVec& x) {
    bool first = true;
    Rat best;
    for (std::size_t i = 0; i < tp.exps.size(); ++i) {
        Rat v = tp.coeffs[i];
        for (int j = 0; j < tp.n; ++j) v += Rat(tp.exps[i][j]) * x[j];
        if (first || v > best) { best = v; first = false; }
    }
    return best;
}

inline double tropical_eval(const TropicalPolynomial& tp, const std::vector<double>& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tp.exps.size(); ++i) {
        double v = rat_to_double(tp.coeffs[i]);
        for (int j = 0; j < tp.n; ++j) v += (double)tp.exps[i][j] * x[j];
        best = std::max(best, v);
    }
    return best;
}

/// Exact value together with the exponents attaining it.
inline std::pair<Rat, std::vector<Exponent>> tropical_eval_argmax(const TropicalPolynomial& tp,
                                                                  const RatVec& x) {
    Rat best = tropical_eval(tp, x);
    std::vector<Exponent> arg;
    for (std::size_t i = 0; i < tp.exps.size(); ++i) {
        Rat v = tp.coeffs[i];
        for (int j = 0; j < tp.n; ++j) v += Rat(tp.exps[i][j]) * x[j];
        if (v == best) arg.push_back(tp.exps[i]);
    }
    return {best, arg};
}

/// Exponents achieving the max at x, within slack tol.
inline std::vector<Exponent> tropical_argmax(const TropicalPolynomial& tp,
                                             const std::vector<double>& x, double tol = 1e-9) {
    double best = tropical_eval(tp, x);
    std::vector<Exponent> out;
    for (std::size_t i = 0; i < tp.exps.size(); ++i) {
        double v = rat_to_double(tp.coeffs[i]);
        for (int j = 0; j < tp.n; ++j) v += (double)tp.exps[i][j] * x[j];
        if (v >= best - tol) out.push_back(tp.exps[i]);
    }
    return out;
}

/// The regular subdivision dual to the corner locus: heights are the negated
/// tropical coefficients, cells collect the exponents tied for the max over
/// the dual tropical vertex.
inline RegularSubdivision dual_subdivision(const TropicalPolynomial& tp) {
    std::vector<Rat> h;
    h.reserve(tp.coeffs.size());
    for (const auto& c : tp.coeffs) h.push_back(-c);
    return regular_subdivision(tp.exps, h);
}

struct SpineVertex {
    RatVec pos;        // = gradient of the dual cell's lower support
    std::size_t cell;  // index into dual.cells
};

/// Bounded spine edge dual to an interior subdivision edge [tauA,tauB].
struct SpineEdge {
    std::size_t v0, v1;
    IntVec dir;        // primitive, oriented away from v0
    long long weight;  // lattice length of the dual subdivision edge
    Exponent tauA, tauB;
};

/// Unbounded spine ray dual to a boundary subdivision edge.
struct SpineRay {
    std::size_t v0;
    IntVec dir;  // primitive outward normal of the Newton polytope edge
    long long weight;
    Exponent tauA, tauB;
};

struct TropicalComplex {
    int n = 0;
    RegularSubdivision dual;
    std::vector<SpineVertex> vertices;
    std::vector<SpineEdge> edges;
    std::vector<SpineRay> rays;
};

/// Corner locus of a tropical polynomial for n <= 2: one vertex per maximal
/// dual cell, one bounded edge per interior dual edge, one ray per boundary
/// dual edge (direction = outward polytope normal there). For n = 1 the
/// locus is the vertex set alone.
inline TropicalComplex corner_locus(const TropicalPolynomial& tp) {
    if (tp.n > 2) throw error("corner_locus: only n <= 2 supported");
    TropicalComplex tc;
    tc.n = tp.n;
    tc.dual = dual_subdivision(tp);
    for (std::size_t ci = 0; ci < tc.dual.cells.size(); ++ci)
        tc.vertices.push_back({tc.dual.cells[ci].grad, ci});
    if (tp.n == 1) return tc;

    NewtonPolytope np = newton_polytope(tp.exps);
    for (const auto& e : tc.dual.edges) {
        if (e.cells.size() == 2) {
            std::size_t v0 = e.cells[0], v1 = e.cells[1];
            // the spine edge is perpendicular to its dual subdivision edge;
            // the rational positions only decide the orientation (their
            // difference is parallel to this normal and nonzero, because the
            // two cell gradients differ exactly across an interior edge)
            IntVec id = primitive({-(e.b[1] - e.a[1]), e.b[0] - e.a[0]});
            Rat s = (tc.vertices[v1].pos[0] - tc.vertices[v0].pos[0]) * id[0] +
                    (tc.vertices[v1].pos[1] - tc.vertices[v0].pos[1]) * id[1];
            if (s < 0)
                for (auto& x : id) x = -x;
            tc.edges.push_back({v0, v1, id, e.lattice_length(), e.a, e.b});
        } else if (e.cells.size() == 1) {
            // boundary edge: find the polytope facet containing it
            IntVec out;
            bool found = false;
            for (const auto& f : np.facets) {
                if (idot(f.normal, e.a) == f.offset && idot(f.normal, e.b) == f.offset) {
                    out = f.normal;
                    for (auto& x : out) x = -x;  // inner -> outward
                    found = true;
                    break;
                }
            }
            if (!found) throw error("corner_locus: boundary edge not on a facet");
            tc.rays.push_back({e.cells[0], out, e.lattice_length(), e.a, e.b});
        }
    }
    return tc;
}

/// Exact balancing check: at every spine vertex the weighted primitive
/// directions (oriented away from the vertex) sum to zero. For n = 1 there is
/// nothing to check. Optionally reports the defect vector per vertex.
inline bool check_balancing(const TropicalComplex& tc, std::vector<IntVec>* defects = nullptr) {
    if (defects) defects->assign(tc.vertices.size(), IntVec(tc.n, 0));
    if (tc.n < 2) return true;
    bool ok = true;
    std::vector<IntVec> sum(tc.vertices.size(), IntVec(tc.n, 0));
    for (const auto& e : tc.edges) {
        for (int j = 0; j < tc.n; ++j) {
            sum[e.v0][j] += e.weight * e.dir[j];
            sum[e.v1][j] -= e.weight * e.dir[j];
        }
    }
    for (const auto& r : tc.rays)
        for (int j = 0; j < tc.n; ++j) sum[r.v0][j] += r.weight * r.dir[j];
    for (std::size_t i = 0; i < sum.size(); ++i) {
        bool zero = true;
        for (int j = 0; j < tc.n; ++j) zero &= (sum[i][j] == 0);
        if (!zero) ok = false;
        if (defects) (*defects)[i] = sum[i];
    }
    return ok;
}

/// Spine of an amoeba from measured tropical coefficients: exponents with
/// their estimated c values, snapped to rationals for an exact corner locus.
inline TropicalComplex spine_from_phi(std::vector<Exponent> exps, const std::vector<double>& c) {
    std::vector<Rat> coeffs;
    coeffs.reserve(c.size());
    for (double v : c) coeffs.push_back(rationalize(v));
    return corner_locus(make_tropical(std::move(exps), std::move(coeffs)));
}

}  // namespace coam
