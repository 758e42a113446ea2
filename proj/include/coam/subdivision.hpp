#pragma once

#include "coam/polytope.hpp"

#include <map>
#include <optional>

namespace coam {

/// Maximal cell of a regular subdivision: the configuration points where the
/// lower support <grad,x> + offset is tight. The gradient doubles as the dual
/// tropical vertex under Legendre duality.
struct SubdivisionCell {
    std::vector<Exponent> points;    // sorted lex
    std::vector<Exponent> vertices;  // hull vertices of the cell, sorted lex
    RatVec grad;
    Rat offset;
};

/// Edge of a subdivision: a 1-face with lattice endpoints a < b (lex),
/// remembering which maximal cells it bounds.
struct SubdivisionEdge {
    Exponent a, b;
    std::vector<std::size_t> cells;

    /// Lattice length: number of lattice points on the segment minus one.
    long long lattice_length() const {
        IntVec d((long long)a.size());
        for (std::size_t j = 0; j < a.size(); ++j) d[j] = b[j] - a[j];
        return content(d);
    }

    /// Primitive direction from a to b.
    IntVec direction() const {
        IntVec d((long long)a.size());
        for (std::size_t j = 0; j < a.size(); ++j) d[j] = b[j] - a[j];
        return primitive(d);
    }
};

struct RegularSubdivision {
    int n = 0;
    std::vector<Exponent> points;
    std::vector<Rat> heights;  // parallel to points
    std::vector<SubdivisionCell> cells;
    std::vector<SubdivisionEdge> edges;  // n <= 2 only

    std::optional<Rat> height_of(const Exponent& p) const {
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i] == p) return heights[i];
        return std::nullopt;
    }

    /// Subdivision vertices: union of the hull vertices of all maximal cells.
    std::vector<Exponent> vertex_set() const {
        std::vector<Exponent> v;
        for (const auto& c : cells) v.insert(v.end(), c.vertices.begin(), c.vertices.end());
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    bool is_vertex(const Exponent& p) const {
        for (const auto& c : cells)
            if (std::binary_search(c.vertices.begin(), c.vertices.end(), p)) return true;
        return false;
    }
};

/// Lifting data for the generalized height-and-phase function: each lattice
/// point carries a real height and a phase angle in [0,2pi).
struct Lifting {
    struct Entry {
        double height = 0;
        double phase = 0;
    };
    std::map<Exponent, Entry> entries;

    double phase_of(const Exponent& p) const {
        auto it = entries.find(p);
        if (it == entries.end()) throw error("Lifting: missing phase for a point");
        return it->second.phase;
    }
    double height_of(const Exponent& p) const {
        auto it = entries.find(p);
        if (it == entries.end()) throw error("Lifting: missing height for a point");
        return it->second.height;
    }
};

namespace detail {

/// Edges of one maximal cell (n <= 2): consecutive hull vertices in cyclic
/// order for n = 2, the segment endpoints for n = 1.
inline std::vector<std::pair<Exponent, Exponent>> cell_edge_pairs(const SubdivisionCell& cell,
                                                                  int n) {
    std::vector<std::pair<Exponent, Exponent>> out;
    if (n == 1) {
        out.push_back({cell.vertices.front(), cell.vertices.back()});
        return out;
    }
    NewtonPolytope hull = newton_polytope(cell.vertices);
    std::vector<Exponent> cyc = cyclic_vertices(hull);
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        Exponent u = cyc[i], v = cyc[(i + 1) % cyc.size()];
        if (v < u) std::swap(u, v);
        out.push_back({u, v});
    }
    return out;
}

}  // namespace detail

/// Regular subdivision of a point configuration induced by lifting heights:
/// maximal cells are the projections of the lower facets of
/// conv{(p, h(p))}. Brute force over (n+1)-subsets at desk scale.
inline RegularSubdivision regular_subdivision(const std::vector<Exponent>& pointsIn,
                                              const std::vector<Rat>& heightsIn) {
    if (pointsIn.size() != heightsIn.size())
        throw error("regular_subdivision: points/heights size mismatch");
    if (pointsIn.size() < 2) throw error("regular_subdivision: need at least 2 points");
    int n = (int)pointsIn[0].size();

    // sort configuration lex, carrying heights; merged duplicates are an error
    std::vector<std::size_t> perm(pointsIn.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t i, std::size_t j) { return pointsIn[i] < pointsIn[j]; });
    RegularSubdivision sd;
    sd.n = n;
    for (std::size_t i : perm) {
        if (!sd.points.empty() && sd.points.back() == pointsIn[i])
            throw error("regular_subdivision: duplicate configuration point");
        sd.points.push_back(pointsIn[i]);
        sd.heights.push_back(heightsIn[i]);
    }

    if (detail::affine_dim(sd.points) < n)
        throw degenerate_error("regular_subdivision: configuration not full-dimensional");

    std::size_t m = sd.points.size();
    std::size_t k = (std::size_t)n + 1;
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    auto next_comb = [&]() -> bool {
        std::size_t i = k;
        while (i-- > 0) {
            if (comb[i] != m - (k - i)) {
                ++comb[i];
                for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    std::set<std::vector<Exponent>> seen;
    do {
        // affine function <a,x> + b through the lifted subset
        RatMat M(k, RatVec(k));
        RatVec rhs(k);
        for (std::size_t r = 0; r < k; ++r) {
            for (int j = 0; j < n; ++j) M[r][j] = Rat(sd.points[comb[r]][j]);
            M[r][n] = 1;
            rhs[r] = sd.heights[comb[r]];
        }
        auto sol = rat_solve(M, rhs);
        if (!sol) continue;
        RatVec a((*sol).begin(), (*sol).begin() + n);
        Rat b = (*sol)[n];
        bool lowerSupport = true;
        std::vector<Exponent> cellPts;
        for (std::size_t i = 0; i < m; ++i) {
            Rat val = b;
            for (int j = 0; j < n; ++j) val += a[j] * Rat(sd.points[i][j]);
            if (val > sd.heights[i]) { lowerSupport = false; break; }
            if (val == sd.heights[i]) cellPts.push_back(sd.points[i]);
        }
        if (!lowerSupport) continue;
        if (detail::affine_dim(cellPts) < n) continue;  // face, not a maximal cell
        if (!seen.insert(cellPts).second) continue;
        SubdivisionCell cell;
        cell.points = cellPts;
        cell.vertices = newton_polytope(cellPts).vertices;
        cell.grad = std::move(a);
        cell.offset = b;
        sd.cells.push_back(std::move(cell));
    } while (next_comb());

    if (n <= 2) {
        std::map<std::pair<Exponent, Exponent>, std::vector<std::size_t>> em;
        for (std::size_t ci = 0; ci < sd.cells.size(); ++ci)
            for (auto& pr : detail::cell_edge_pairs(sd.cells[ci], n)) em[pr].push_back(ci);
        for (auto& [pr, cs] : em) sd.edges.push_back({pr.first, pr.second, cs});
    }
    return sd;
}

/// Numeric heights are snapped to rationals (denominator <= 2^40) so the
/// combinatorics downstream stay exact.
inline RegularSubdivision regular_subdivision(const std::vector<Exponent>& points,
                                              const std::vector<double>& heights) {
    std::vector<Rat> h;
    h.reserve(heights.size());
    for (double x : heights) h.push_back(rationalize(x));
    return regular_subdivision(points, h);
}

/// Every maximal cell is a simplex.
inline bool is_triangulation(const RegularSubdivision& sd) {
    for (const auto& c : sd.cells)
        if (c.vertices.size() != (std::size_t)sd.n + 1) return false;
    return true;
}

/// Value of the lower convex envelope at x (x must lie in the hull).
inline Rat envelope_value(const RegularSubdivision& sd, const Exponent& x) {
    if (sd.cells.empty()) throw error("envelope_value: no cells");
    bool first = true;
    Rat best;
    for (const auto& c : sd.cells) {
        Rat v = c.offset;
        for (int j = 0; j < sd.n; ++j) v += c.grad[j] * Rat(x[j]);
        if (first || v > best) { best = v; first = false; }
    }
    return best;
}

/// Diagnostic refinement: re-triangulate with an extra point whose height
/// dips by delta below the envelope, so it is forced to appear as a cell
/// vertex. Small delta keeps the change local to the containing cell.
inline RegularSubdivision force_split(const RegularSubdivision& sd, const Exponent& beta,
                                      Rat delta = Rat(1, 1024)) {
    if (delta <= 0) throw error("force_split: delta must be positive");
    std::vector<Exponent> pts = sd.points;
    std::vector<Rat> hts = sd.heights;
    for (const auto& p : pts)
        if (p == beta) throw error("force_split: point already in configuration");
    pts.push_back(beta);
    hts.push_back(envelope_value(sd, beta) - delta);
    return regular_subdivision(pts, hts);
}

}  // namespace coam
