#pragma once

#include <coam/linalg.hpp>
#include <coam/poly.hpp>
#include <coam/polytope.hpp>
#include <coam/roots.hpp>
#include <coam/subdivision.hpp>

#include <array>

namespace coam {

/// Convex polygon on the torus, stored in the universal cover (vertices may
/// exceed [0, 2pi); the quotient map wraps them).
struct TorusPolygon {
    std::vector<std::array<double, 2>> verts;  // ccw
    long long multiplicity = 1;
};

/// Exact region description of a coamoeba: open polygons for n = 2, isolated
/// points for n = 1.
struct TorusRegionSet {
    int n = 0;
    std::vector<TorusPolygon> polygons;
    std::vector<std::pair<double, long long>> points;  // (angle, multiplicity)
};

/// Membership in the closed coamoeba of the standard hyperplane polynomial
/// 1 + z_1 + ... + z_n: some point of the fiber torus over theta sums to
/// zero, which happens exactly when -1 is a strictly positive combination of
/// the unit vectors e^{i theta_j}, i.e. lies in the relative interior of
/// their conic hull in R^2.
inline bool standard_coamoeba_member(const std::vector<double>& theta, double tol = 1e-9) {
    std::size_t n = theta.size();
    if (n == 0) throw error("standard_coamoeba_member: empty angle tuple");
    std::vector<std::array<double, 2>> u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = {std::cos(theta[j]), std::sin(theta[j])};
    const std::array<double, 2> target{-1.0, 0.0};
    auto dot = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        return a[0] * b[0] + a[1] * b[1];
    };

    // best closed half-plane {<c, .> >= 0} among the generator perpendiculars
    std::array<double, 2> cStar{0, 0};
    double bestMin = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
        for (double s : {1.0, -1.0}) {
            std::array<double, 2> c{-s * u[j][1], s * u[j][0]};
            double mn = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k) mn = std::min(mn, dot(c, u[k]));
            if (mn > bestMin) {
                bestMin = mn;
                cStar = c;
            }
        }
    if (bestMin < -tol) return true;  // generators positively span R^2

    std::array<double, 2> dir{-cStar[1], cStar[0]};
    bool interior = false, pos = false, neg = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (dot(cStar, u[k]) > tol) interior = true;
        double t = dot(u[k], dir);
        pos |= t > tol;
        neg |= t < -tol;
    }
    if (!interior) {
        // cone is contained in the boundary line: a ray or the full line
        if (std::abs(dot(target, cStar)) > tol) return false;
        double t = dot(target, dir);
        if (pos && neg) return true;
        return pos ? t > tol : t < -tol;
    }
    // full-dimensional cone: relint is the open sector between the extreme
    // generators, measured by the angle from dir within the half-plane
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        double phi = std::atan2(dot(u[k], cStar), dot(u[k], dir));
        lo = std::min(lo, phi);
        hi = std::max(hi, phi);
    }
    double phiT = std::atan2(dot(target, cStar), dot(target, dir));
    return phiT > lo + tol && phiT < hi - tol;
}

/// Exact coamoeba of 1 + z_1 + ... + z_n as a region set: the point pi for
/// n = 1; for n = 2 the two open triangles of the classical picture (the
/// three isolated boundary points are carried by the membership predicate,
/// not the region list). Regions are not available beyond n = 2.
inline TorusRegionSet standard_hyperplane_coamoeba(int n) {
    TorusRegionSet rs;
    rs.n = n;
    if (n == 1) {
        rs.points.push_back({kPi, 1});
        return rs;
    }
    if (n != 2) throw error("standard_hyperplane_coamoeba: regions only for n <= 2");
    TorusPolygon tPlus, tMinus;
    tPlus.verts = {{0, kPi}, {kPi, kPi}, {kPi, kTwoPi}};
    tMinus.verts = {{kPi, 0}, {kTwoPi, kPi}, {kPi, kPi}};
    rs.polygons = {tPlus, tMinus};
    return rs;
}

struct SimplexCoamoeba {
    TorusRegionSet regions;
    long long componentCount = 0;  // |det L|
    Exponent base;
    IntMat L;                  // rows: the non-base vertices minus base
    RatMat transform;          // L^{-1}, exact
    std::vector<double> argA;  // arg(a_v / a_base) per row
};

/// Coamoeba of a maximally sparse simplex polynomial, exactly: substituting
/// y_j = (a_j/a_base) z^{row_j} reduces to the standard hyperplane, so the
/// coamoeba is the union of |det L| affine copies of its coamoeba, one per
/// coset of L Z^n in Z^n. Rows are the lex-sorted vertex differences from
/// the lex-least vertex; the first two rows are swapped if det L < 0.
inline SimplexCoamoeba simplex_coamoeba(const LaurentPolynomial& p) {
    if (p.n > 2) throw error("simplex_coamoeba: n <= 2 only");
    NewtonPolytope np = newton_polytope(p);
    if (np.degenerate) throw degenerate_error("simplex_coamoeba: degenerate support");
    if (np.points.size() != (std::size_t)p.n + 1 || np.points != np.vertices)
        throw error("simplex_coamoeba: support must be the vertex set of a simplex");

    SimplexCoamoeba sc;
    std::vector<Exponent> vs = np.vertices;
    std::sort(vs.begin(), vs.end());
    sc.base = vs.front();
    std::vector<Exponent> others(vs.begin() + 1, vs.end());

    sc.L.assign(p.n, IntVec(p.n, 0));
    for (int r = 0; r < p.n; ++r)
        for (int j = 0; j < p.n; ++j) sc.L[r][j] = others[r][j] - sc.base[j];
    auto det2 = [&]() {
        return p.n == 1 ? sc.L[0][0] : sc.L[0][0] * sc.L[1][1] - sc.L[0][1] * sc.L[1][0];
    };
    if (p.n == 2 && det2() < 0) {
        std::swap(sc.L[0], sc.L[1]);
        std::swap(others[0], others[1]);
    }
    long long D = std::abs(det2());
    if (D == 0) throw degenerate_error("simplex_coamoeba: flat simplex");
    sc.componentCount = D;

    const Cplx aBase = *p.coeff(sc.base);
    sc.argA.resize(p.n);
    for (int r = 0; r < p.n; ++r) sc.argA[r] = std::arg(*p.coeff(others[r]) / aBase);

    RatMat L(p.n, RatVec(p.n));
    for (int r = 0; r < p.n; ++r)
        for (int j = 0; j < p.n; ++j) L[r][j] = Rat(sc.L[r][j]);
    auto inv = rat_inverse(L);
    if (!inv) throw degenerate_error("simplex_coamoeba: singular vertex matrix");
    sc.transform = *inv;

    sc.regions.n = p.n;
    if (p.n == 1) {
        // base is lex-least so L[0][0] = D > 0
        for (long long k = 0; k < D; ++k) {
            double th = (kPi - sc.argA[0] + kTwoPi * (double)k) / (double)D;
            sc.regions.points.push_back({wrap_angle(th), 1});
        }
        std::sort(sc.regions.points.begin(), sc.regions.points.end());
        return sc;
    }

    // coset representatives of Z^2 / L Z^2: D Z^2 refines L Z^2, so the box
    // [0, D)^2 meets every coset; keep pairwise-inequivalent ones
    std::vector<std::array<long long, 2>> reps;
    auto equivalent = [&](long long dx, long long dy) {
        for (int r = 0; r < 2; ++r) {
            Rat v = sc.transform[r][0] * Rat(dx) + sc.transform[r][1] * Rat(dy);
            if (boost::multiprecision::denominator(v) != 1) return false;
        }
        return true;
    };
    for (long long kx = 0; kx < D && (long long)reps.size() < D; ++kx)
        for (long long ky = 0; ky < D && (long long)reps.size() < D; ++ky) {
            bool dup = false;
            for (auto& r : reps) dup |= equivalent(kx - r[0], ky - r[1]);
            if (!dup) reps.push_back({kx, ky});
        }

    TorusRegionSet std2 = standard_hyperplane_coamoeba(2);
    for (auto& k : reps)
        for (const auto& tri : std2.polygons) {
            TorusPolygon out;
            out.multiplicity = tri.multiplicity;
            for (const auto& v : tri.verts) {
                double s0 = v[0] - sc.argA[0] + kTwoPi * (double)k[0];
                double s1 = v[1] - sc.argA[1] + kTwoPi * (double)k[1];
                out.verts.push_back(
                    {rat_to_double(sc.transform[0][0]) * s0 + rat_to_double(sc.transform[0][1]) * s1,
                     rat_to_double(sc.transform[1][0]) * s0 + rat_to_double(sc.transform[1][1]) * s1});
            }
            // keep ccw orientation under the affine map
            double cr = (out.verts[1][0] - out.verts[0][0]) * (out.verts[2][1] - out.verts[0][1]) -
                        (out.verts[1][1] - out.verts[0][1]) * (out.verts[2][0] - out.verts[0][0]);
            if (cr < 0) std::swap(out.verts[1], out.verts[2]);
            sc.regions.polygons.push_back(out);
        }
    return sc;
}

namespace detail {

/// Canonical key for merging torus polygons: wrap the centroid into the
/// fundamental domain, translate the polygon accordingly, and list vertices
/// from the lex-least, rounded to 1e-7.
inline std::string polygon_key(const TorusPolygon& poly) {
    double cx = 0, cy = 0;
    for (auto& v : poly.verts) {
        cx += v[0];
        cy += v[1];
    }
    cx /= (double)poly.verts.size();
    cy /= (double)poly.verts.size();
    double sx = kTwoPi * std::floor(cx / kTwoPi), sy = kTwoPi * std::floor(cy / kTwoPi);
    std::vector<std::array<long long, 2>> vs;
    for (auto& v : poly.verts)
        vs.push_back({(long long)std::llround((v[0] - sx) * 1e7), (long long)std::llround((v[1] - sy) * 1e7)});
    std::size_t lead = 0;
    for (std::size_t i = 1; i < vs.size(); ++i)
        if (vs[i] < vs[lead]) lead = i;
    std::string key;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        auto& v = vs[(lead + i) % vs.size()];
        key += std::to_string(v[0]) + "," + std::to_string(v[1]) + ";";
    }
    return key;
}

}  // namespace detail

/// Coamoeba of the complex tropical hypersurface defined by a phase lift
/// over a triangulated subdivision: the union over maximal cells of the
/// simplex coamoebas with unit coefficients e^{i phase}. Identical pieces
/// arising from different cells merge with added multiplicity.
inline TorusRegionSet nonarch_coamoeba(const RegularSubdivision& sd, const Lifting& lift) {
    if (!is_triangulation(sd)) throw error("nonarch_coamoeba: subdivision must be a triangulation");
    if (sd.n > 2) throw error("nonarch_coamoeba: n <= 2 only");
    TorusRegionSet rs;
    rs.n = sd.n;
    std::map<std::string, std::size_t> seen;
    std::map<long long, long long> seenPts;  // rounded angle -> index
    std::vector<std::pair<double, long long>> pts;
    for (const auto& cell : sd.cells) {
        std::vector<Term> terms;
        for (const auto& v : cell.vertices)
            terms.push_back({v, std::polar(1.0, lift.phase_of(v))});
        auto sc = simplex_coamoeba(make_polynomial(sd.n, terms));
        for (const auto& poly : sc.regions.polygons) {
            std::string key = detail::polygon_key(poly);
            auto it = seen.find(key);
            if (it == seen.end()) {
                seen[key] = rs.polygons.size();
                rs.polygons.push_back(poly);
            } else {
                rs.polygons[it->second].multiplicity += poly.multiplicity;
            }
        }
        for (const auto& [th, m] : sc.regions.points) {
            long long key = (long long)std::llround(wrap_angle(th) * 1e7);
            auto it = seenPts.find(key);
            if (it == seenPts.end()) {
                seenPts[key] = (long long)pts.size();
                pts.push_back({wrap_angle(th), m});
            } else {
                pts[(std::size_t)it->second].second += m;
            }
        }
    }
    rs.points = pts;
    std::sort(rs.points.begin(), rs.points.end());
    return rs;
}

/// Exact coamoeba of a univariate Laurent polynomial: the arguments of its
/// roots in C*, clustered with multiplicity.
inline std::vector<std::pair<double, long long>> univariate_coamoeba(const LaurentPolynomial& p,
                                                                     double tol = 1e-9) {
    if (p.n != 1) throw error("univariate_coamoeba: univariate only");
    long long kmin = p.terms.front().exp[0];
    for (const auto& t : p.terms) kmin = std::min(kmin, t.exp[0]);
    long long kmax = p.terms.front().exp[0];
    for (const auto& t : p.terms) kmax = std::max(kmax, t.exp[0]);
    std::vector<Cplx> c(std::size_t(kmax - kmin + 1), Cplx(0, 0));
    for (const auto& t : p.terms) c[std::size_t(t.exp[0] - kmin)] = t.coeff;
    std::vector<double> args;
    for (const auto& r : poly_roots(c))
        if (std::abs(r) > 0) args.push_back(wrap_angle(std::arg(r)));
    std::sort(args.begin(), args.end());
    std::vector<std::pair<double, long long>> out;
    for (double a : args) {
        if (!out.empty() && (a - out.back().first < tol ||
                             kTwoPi - a + out.front().first < tol)) {
            if (a - out.back().first < tol) {
                ++out.back().second;
                continue;
            }
            ++out.front().second;  // wraps onto the first cluster
            continue;
        }
        out.push_back({a, 1});
    }
    return out;
}

}  // namespace coam
