#pragma once

#include "coam/linalg.hpp"
#include "coam/poly.hpp"

#include <algorithm>
#include <set>

namespace coam {

/// A facet {x : <normal,x> >= offset} of a full-dimensional lattice polytope;
/// `normal` is the primitive inner normal.
struct Facet {
    IntVec normal;
    long long offset;
};

struct NewtonPolytope {
    int n = 0;
    std::vector<Exponent> points;         // the defining support, sorted lex
    std::vector<Exponent> vertices;       // extreme points, sorted lex (cyclic for n=2)
    std::vector<Facet> facets;            // empty when degenerate
    std::vector<Exponent> latticePoints;  // all of Delta cap Z^n, sorted lex
    bool degenerate = false;              // affine dimension < n
    int affineDim = 0;

    bool contains(const Exponent& x) const {
        if (degenerate) throw degenerate_error("contains: degenerate polytope");
        for (const auto& f : facets)
            if (idot(f.normal, x) < f.offset) return false;
        return true;
    }

    bool on_boundary(const Exponent& x) const {
        if (degenerate) throw degenerate_error("on_boundary: degenerate polytope");
        for (const auto& f : facets)
            if (idot(f.normal, x) == f.offset) return true;
        return false;
    }

    bool is_vertex(const Exponent& x) const {
        return std::binary_search(vertices.begin(), vertices.end(), x);
    }
};

namespace detail {

/// Affine dimension of a point set and a row basis of the linear span of
/// differences from points[0].
inline int affine_dim(const std::vector<Exponent>& pts, RatMat* spanBasis = nullptr) {
    if (pts.empty()) return -1;
    std::size_t n = pts[0].size();
    RatMat diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        RatVec d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = Rat(pts[i][j] - pts[0][j]);
        diffs.push_back(std::move(d));
    }
    if (diffs.empty()) {
        if (spanBasis) spanBasis->clear();
        return 0;
    }
    RatMat reduced = diffs;
    std::size_t rank = row_reduce(reduced);
    if (spanBasis) {
        spanBasis->clear();
        for (std::size_t r = 0; r < rank; ++r) spanBasis->push_back(reduced[r]);
    }
    return (int)rank;
}

/// Facets of the convex hull of full-dimensionally spanning lattice points,
/// by brute force over n-subsets: each affinely independent n-subset spans a
/// candidate hyperplane; keep it when all points lie weakly on one side.
inline std::vector<Facet> brute_facets(const std::vector<Exponent>& pts, int n) {
    std::vector<Facet> out;
    std::set<std::pair<IntVec, long long>> seen;
    std::size_t m = pts.size();
    std::vector<std::size_t> idx(n);
    // iterate over n-subsets
    std::vector<std::size_t> comb(n);
    for (int i = 0; i < n; ++i) comb[i] = i;
    auto next_comb = [&]() -> bool {
        int i = n - 1;
        while (i >= 0 && comb[i] == m - (std::size_t)(n - i)) --i;
        if (i < 0) return false;
        ++comb[i];
        for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
        return true;
    };
    if ((std::size_t)n > m) return out;
    do {
        // differences within the subset span the hyperplane direction space
        RatMat diffs;
        for (int i = 1; i < n; ++i) {
            RatVec d(n);
            for (int j = 0; j < n; ++j)
                d[j] = Rat(pts[comb[i]][j] - pts[comb[0]][j]);
            diffs.push_back(std::move(d));
        }
        IntVec normal;
        if (n == 1) {
            normal = {1};
        } else {
            RatMat ker = rat_nullspace(diffs);
            if (ker.size() != 1) continue;  // not affinely independent
            // scale rational normal to primitive integer
            BigInt lcm = 1;
            for (const auto& q : ker[0]) {
                BigInt den = boost::multiprecision::denominator(q);
                lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
            }
            normal.resize(n);
            for (int j = 0; j < n; ++j) {
                Rat scaled = ker[0][j] * Rat(lcm);
                normal[j] = boost::multiprecision::numerator(scaled).convert_to<long long>();
            }
            normal = primitive(normal);
        }
        long long off = idot(normal, pts[comb[0]]);
        bool anyBelow = false, anyAbove = false;
        for (const auto& p : pts) {
            long long v = idot(p, normal);
            if (v < off) anyBelow = true;
            if (v > off) anyAbove = true;
        }
        if (anyBelow && anyAbove) continue;
        IntVec inner = normal;
        long long offset = off;
        if (anyBelow) {  // flip so normal points inward
            for (auto& x : inner) x = -x;
            offset = -off;
        } else if (!anyAbove) {
            continue;  // all points on the hyperplane: degenerate, caller guards
        }
        if (seen.insert({inner, offset}).second) out.push_back({inner, offset});
    } while (next_comb());
    return out;
}

inline void sort_points(std::vector<Exponent>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// Vertices = points where the active facet normals span R^n.
inline std::vector<Exponent> facet_vertices(const std::vector<Exponent>& pts,
                                            const std::vector<Facet>& facets, int n) {
    std::vector<Exponent> verts;
    for (const auto& p : pts) {
        RatMat active;
        for (const auto& f : facets) {
            if (idot(f.normal, p) != f.offset) continue;
            RatVec row(n);
            for (int j = 0; j < n; ++j) row[j] = Rat(f.normal[j]);
            active.push_back(std::move(row));
        }
        if ((int)active.size() >= n && (int)rat_rank(active) == n) verts.push_back(p);
    }
    sort_points(verts);
    return verts;
}

/// Normalized lattice volume (n! times Euclidean volume) of a full-dim hull.
/// Recursion: pick a base vertex; for each facet not containing it, add
/// |<g, v0> - c| times the (n-1)-volume of the facet in its own lattice.
inline BigInt normalized_volume_rec(const std::vector<Exponent>& pts, int n);

inline BigInt facet_volume(const std::vector<Exponent>& facetPts, const Facet& f, int n) {
    if (n == 1) return BigInt(1);  // a facet of a segment is a point
    IntMat basis = kernel_lattice_basis(f.normal);
    // Coordinates of facet points in the kernel-lattice basis (all integer).
    RatMat B((std::size_t)n, RatVec(basis.size()));
    for (int i = 0; i < n; ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) B[i][j] = Rat(basis[j][i]);
    std::vector<Exponent> proj;
    for (const auto& p : facetPts) {
        RatVec rhs(n);
        for (int j = 0; j < n; ++j) rhs[j] = Rat(p[j] - facetPts[0][j]);
        // solve B * c = rhs in least-dimension sense: B is n x (n-1) with full
        // column rank; extend with the facet normal to square it.
        RatMat M((std::size_t)n, RatVec((std::size_t)n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j + 1 < n; ++j) M[i][j] = B[i][j];
            M[i][n - 1] = Rat(f.normal[i]);
        }
        auto sol = rat_solve(M, rhs);
        if (!sol) throw degenerate_error("facet_volume: singular lattice basis");
        Exponent c(n - 1);
        for (int j = 0; j + 1 < n; ++j) {
            const Rat& q = (*sol)[j];
            if (boost::multiprecision::denominator(q) != 1)
                throw degenerate_error("facet_volume: non-lattice facet coordinate");
            c[j] = boost::multiprecision::numerator(q).convert_to<long long>();
        }
        proj.push_back(std::move(c));
    }
    return normalized_volume_rec(proj, n - 1);
}

inline BigInt normalized_volume_rec(const std::vector<Exponent>& ptsIn, int n) {
    std::vector<Exponent> pts = ptsIn;
    sort_points(pts);
    if (n == 0) return BigInt(1);
    if (n == 1) {
        long long lo = pts.front()[0], hi = pts.back()[0];
        return BigInt(hi - lo);
    }
    if (affine_dim(pts) < n) return BigInt(0);
    auto facets = brute_facets(pts, n);
    const Exponent& v0 = pts.front();
    BigInt vol = 0;
    for (const auto& f : facets) {
        long long h = idot(f.normal, v0) - f.offset;
        if (h == 0) continue;
        std::vector<Exponent> fp;
        for (const auto& p : pts)
            if (idot(f.normal, p) == f.offset) fp.push_back(p);
        vol += BigInt(h) * facet_volume(fp, f, n);
    }
    return vol;
}

}  // namespace detail

/// Convex hull data of a support set. Degenerate (affine dimension < n)
/// inputs are represented with the flag set; facets stay empty there and
/// most downstream operations reject them.
inline NewtonPolytope newton_polytope(const std::vector<Exponent>& supportIn) {
    if (supportIn.empty()) throw error("newton_polytope: empty support");
    int n = (int)supportIn[0].size();
    for (const auto& e : supportIn)
        if ((int)e.size() != n) throw error("newton_polytope: arity mismatch");
    NewtonPolytope np;
    np.n = n;
    np.points = supportIn;
    detail::sort_points(np.points);
    np.affineDim = detail::affine_dim(np.points);
    if (np.affineDim < n) {
        np.degenerate = true;
        // Vertices still make sense inside the affine span: project to a
        // coordinate subset on which the span is injective and recurse via
        // hull extreme-point detection there.
        if (np.affineDim == 0) {
            np.vertices = {np.points.front()};
            np.latticePoints = np.vertices;
            return np;
        }
        RatMat span;
        detail::affine_dim(np.points, &span);
        // choose affineDim coordinate columns with full rank in the span
        std::vector<int> cols;
        RatMat chosen;
        for (int c = 0; c < n && (int)cols.size() < np.affineDim; ++c) {
            RatMat trial = chosen;
            RatVec col(span.size());
            for (std::size_t r = 0; r < span.size(); ++r) col[r] = span[r][c];
            trial.push_back(col);
            if (rat_rank(trial) == trial.size()) {
                chosen = trial;
                cols.push_back(c);
            }
        }
        std::vector<Exponent> proj;
        for (const auto& p : np.points) {
            Exponent q(cols.size());
            for (std::size_t j = 0; j < cols.size(); ++j) q[j] = p[cols[j]];
            proj.push_back(q);
        }
        NewtonPolytope sub = newton_polytope(proj);
        for (const auto& p : np.points) {
            Exponent q(cols.size());
            for (std::size_t j = 0; j < cols.size(); ++j) q[j] = p[cols[j]];
            if (sub.is_vertex(q)) np.vertices.push_back(p);
        }
        detail::sort_points(np.vertices);
        np.latticePoints = np.points;  // conservative: the support itself
        return np;
    }
    np.facets = detail::brute_facets(np.points, n);
    np.vertices = detail::facet_vertices(np.points, np.facets, n);
    // lattice points: bounding-box scan with facet membership
    Exponent lo = np.points.front(), hi = np.points.front();
    for (const auto& p : np.points)
        for (int j = 0; j < n; ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
        }
    Exponent cur = lo;
    for (;;) {
        if (np.contains(cur)) np.latticePoints.push_back(cur);
        int j = 0;
        while (j < n && cur[j] == hi[j]) { cur[j] = lo[j]; ++j; }
        if (j == n) break;
        ++cur[j];
    }
    detail::sort_points(np.latticePoints);
    return np;
}

inline NewtonPolytope newton_polytope(const LaurentPolynomial& p) {
    return newton_polytope(p.support());
}

/// n! times the Euclidean volume; an integer. Errors on degenerate input.
inline BigInt normalized_volume(const NewtonPolytope& np) {
    if (np.degenerate) throw degenerate_error("normalized_volume: degenerate polytope");
    if (np.n == 2) {
        // shoelace over the cyclically ordered hull boundary
        std::vector<Exponent> v = np.vertices;
        Exponent c0 = v.front();
        std::sort(v.begin() + 1, v.end(), [&](const Exponent& a, const Exponent& b) {
            long long cr = (a[0] - c0[0]) * (b[1] - c0[1]) - (a[1] - c0[1]) * (b[0] - c0[0]);
            if (cr != 0) return cr > 0;
            long long da = (a[0] - c0[0]) * (a[0] - c0[0]) + (a[1] - c0[1]) * (a[1] - c0[1]);
            long long db = (b[0] - c0[0]) * (b[0] - c0[0]) + (b[1] - c0[1]) * (b[1] - c0[1]);
            return da < db;
        });
        BigInt twice = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Exponent& a = v[i];
            const Exponent& b = v[(i + 1) % v.size()];
            twice += BigInt(a[0]) * b[1] - BigInt(a[1]) * b[0];
        }
        if (twice < 0) twice = -twice;
        return twice;
    }
    return detail::normalized_volume_rec(np.points, np.n);
}

/// Vertices of a 2-D polytope in counterclockwise cyclic order.
inline std::vector<Exponent> cyclic_vertices(const NewtonPolytope& np) {
    if (np.n != 2) throw error("cyclic_vertices: n must be 2");
    if (np.degenerate) throw degenerate_error("cyclic_vertices: degenerate polytope");
    std::vector<Exponent> v = np.vertices;
    Exponent c0 = *std::min_element(v.begin(), v.end(), [](const Exponent& a, const Exponent& b) {
        return std::make_pair(a[1], a[0]) < std::make_pair(b[1], b[0]);
    });
    std::sort(v.begin(), v.end(), [&](const Exponent& a, const Exponent& b) {
        if (a == c0) return b != c0;
        if (b == c0) return false;
        long long cr = (a[0] - c0[0]) * (b[1] - c0[1]) - (a[1] - c0[1]) * (b[0] - c0[0]);
        if (cr != 0) return cr > 0;
        long long da = (a[0] - c0[0]) * (a[0] - c0[0]) + (a[1] - c0[1]) * (a[1] - c0[1]);
        long long db = (b[0] - c0[0]) * (b[0] - c0[0]) + (b[1] - c0[1]) * (b[1] - c0[1]);
        return da < db;
    });
    return v;
}

/// A polynomial is maximally sparse when its support is exactly the vertex
/// set of its Newton polytope.
inline bool is_maximally_sparse(const LaurentPolynomial& p) {
    NewtonPolytope np = newton_polytope(p);
    return np.points == np.vertices;
}

}  // namespace coam
