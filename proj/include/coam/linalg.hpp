#pragma once

#include "coam/common.hpp"

#include <algorithm>
#include <optional>

namespace coam {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row major

inline RatMat rat_identity(std::size_t n) {
    RatMat m(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

/// Gaussian elimination to row echelon form. Returns the rank; `m` is
/// modified in place. Optional companion matrix `aug` receives the same row
/// operations (used for solving / inverting).
inline std::size_t row_reduce(RatMat& m, RatMat* aug = nullptr) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        if (aug) std::swap((*aug)[piv], (*aug)[rank]);
        Rat inv = Rat(1) / m[rank][c];
        for (auto& x : m[rank]) x *= inv;
        if (aug) for (auto& x : (*aug)[rank]) x *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            Rat f = m[r][c];
            for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[rank][k];
            if (aug) for (std::size_t k = 0; k < (*aug)[r].size(); ++k) (*aug)[r][k] -= f * (*aug)[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline std::size_t rat_rank(RatMat m) { return row_reduce(m); }

inline Rat rat_det(RatMat m) {
    std::size_t n = m.size();
    Rat det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != c) { std::swap(m[piv], m[c]); det = -det; }
        det *= m[c][c];
        Rat inv = Rat(1) / m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rat f = m[r][c] * inv;
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

/// Solve the square system m*x = rhs exactly. Empty optional when singular.
inline std::optional<RatVec> rat_solve(RatMat m, RatVec rhs) {
    std::size_t n = m.size();
    RatMat aug(n, RatVec(1));
    for (std::size_t i = 0; i < n; ++i) aug[i][0] = rhs[i];
    std::size_t rank = row_reduce(m, &aug);
    if (rank < n) return std::nullopt;
    RatVec x(n);
    // After full reduction the pivot of row i sits at column i for square
    // nonsingular systems.
    for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][0];
    return x;
}

inline std::optional<RatMat> rat_inverse(RatMat m) {
    std::size_t n = m.size();
    RatMat aug = rat_identity(n);
    std::size_t rank = row_reduce(m, &aug);
    if (rank < n) return std::nullopt;
    return aug;
}

/// Basis of the null space {x : m x = 0}. Rows of the result are the basis.
inline RatMat rat_nullspace(RatMat m) {
    if (m.empty()) return {};
    std::size_t cols = m[0].size();
    row_reduce(m);
    std::vector<long long> pivotCol(m.size(), -1);
    std::vector<bool> isPivot(cols, false);
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < cols; ++c)
            if (m[r][c] != 0) { pivotCol[r] = (long long)c; isPivot[c] = true; break; }
    }
    RatMat basis;
    for (std::size_t freeC = 0; freeC < cols; ++freeC) {
        if (isPivot[freeC]) continue;
        RatVec v(cols, Rat(0));
        v[freeC] = 1;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (pivotCol[r] < 0) continue;
            v[(std::size_t)pivotCol[r]] = -m[r][freeC];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline long long idot(const IntVec& a, const IntVec& b) {
    long long s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Integer basis of the lattice {x in Z^n : <g,x> = 0} for primitive g.
/// Built from a unimodular completion of g via the extended gcd chain.
inline IntMat kernel_lattice_basis(const IntVec& g) {
    std::size_t n = g.size();
    // Column operations reducing g to (d,0,...,0), tracked on an identity.
    // V holds the operations as columns: g^T * V = (d,0,...,0).
    IntMat V(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) V[i][i] = 1;
    IntVec w = g;
    // Repeatedly fold entry j into the running gcd at position 0.
    for (std::size_t j = 1; j < n; ++j) {
        long long a = w[0], b = w[j];
        if (b == 0) continue;
        // Extended gcd: find s,t with s*a + t*b = d.
        long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            long long q = old_r / r;
            long long tmp = old_r - q * r; old_r = r; r = tmp;
            tmp = old_s - q * s; old_s = s; s = tmp;
            tmp = old_t - q * t; old_t = t; t = tmp;
        }
        long long d = old_r;
        long long u = -(b / d), v = a / d;  // combination giving 0
        // New columns: col0' = s*col0 + t*colj ; colj' = u*col0 + v*colj.
        for (std::size_t i = 0; i < n; ++i) {
            long long c0 = V[i][0], cj = V[i][j];
            V[i][0] = old_s * c0 + old_t * cj;
            V[i][j] = u * c0 + v * cj;
        }
        w[0] = d;
        w[j] = 0;
    }
    IntMat basis;
    for (std::size_t j = 1; j < n; ++j) {
        IntVec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = V[i][j];
        basis.push_back(std::move(col));
    }
    return basis;
}

}  // namespace coam
