#pragma once

#include "coam/common.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace coam {

/// Horner evaluation of sum c[k] z^k, coefficients ascending.
inline Cplx poly_eval(const std::vector<Cplx>& c, Cplx z) {
    Cplx v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
    return v;
}

inline std::vector<Cplx> poly_derivative(const std::vector<Cplx>& c) {
    std::vector<Cplx> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back((double)k * c[k]);
    return d;
}

namespace detail {

/// Backward-error scale sum |c_k| |z|^k for the residual test.
inline double eval_scale(const std::vector<Cplx>& c, double az) {
    double s = 0, p = 1;
    for (const auto& ck : c) {
        s += std::abs(ck) * p;
        p *= az;
    }
    return s;
}

inline std::vector<Cplx> companion_roots(const std::vector<Cplx>& c) {
    std::size_t d = c.size() - 1;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero((Eigen::Index)d, (Eigen::Index)d);
    for (std::size_t i = 0; i + 1 < d; ++i) M((Eigen::Index)(i + 1), (Eigen::Index)i) = 1.0;
    for (std::size_t i = 0; i < d; ++i) M((Eigen::Index)i, (Eigen::Index)(d - 1)) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    if (es.info() != Eigen::Success) throw numeric_error("companion eigensolver failed");
    std::vector<Cplx> roots(d);
    for (std::size_t i = 0; i < d; ++i) roots[i] = es.eigenvalues()((Eigen::Index)i);
    return roots;
}

}  // namespace detail

/// All d complex roots of a degree-d polynomial (ascending coefficients).
/// Aberth-Ehrlich simultaneous iteration with Newton polishing; falls back to
/// companion-matrix eigenvalues when the iteration stalls. Exact zero
/// leading coefficients are stripped; zero roots from a vanishing constant
/// block are returned explicitly.
inline std::vector<Cplx> poly_roots(std::vector<Cplx> c, double tol = 1e-13) {
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() <= 1) return {};
    std::size_t zeroRoots = 0;
    while (std::abs(c.front()) == 0.0) {
        c.erase(c.begin());
        ++zeroRoots;
        if (c.size() <= 1) return std::vector<Cplx>(zeroRoots, Cplx(0));
    }
    for (const auto& ck : c)
        if (!std::isfinite(ck.real()) || !std::isfinite(ck.imag()))
            throw numeric_error("poly_roots: non-finite coefficient");

    std::size_t d = c.size() - 1;
    std::vector<Cplx> z(d);
    // Fujiwara-style radius, symmetry broken by an irrational angle offset
    double r = 0;
    for (std::size_t k = 0; k < d; ++k)
        r = std::max(r, 2.0 * std::pow(std::abs(c[k] / c[d]), 1.0 / (double)(d - k)));
    if (!(r > 0)) r = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        double th = kTwoPi * (double)i / (double)d + 0.4;
        z[i] = r * Cplx(std::cos(th), std::sin(th));
    }

    std::vector<Cplx> dc = poly_derivative(c);
    bool converged = false;
    for (int iter = 0; iter < 120 && !converged; ++iter) {
        converged = true;
        for (std::size_t i = 0; i < d; ++i) {
            Cplx p = poly_eval(c, z[i]);
            if (std::abs(p) <= tol * detail::eval_scale(c, std::abs(z[i]))) continue;
            Cplx dp = poly_eval(dc, z[i]);
            Cplx nw = (dp == Cplx(0)) ? Cplx(0) : p / dp;
            Cplx sum = 0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            Cplx denom = 1.0 - nw * sum;
            Cplx step = (std::abs(denom) < 1e-300) ? nw : nw / denom;
            z[i] -= step;
            if (std::abs(step) > 1e-14 * (1.0 + std::abs(z[i]))) converged = false;
        }
    }
    if (!converged || !std::all_of(z.begin(), z.end(), [&](const Cplx& zi) {
            return std::isfinite(zi.real()) && std::isfinite(zi.imag()) &&
                   std::abs(poly_eval(c, zi)) <=
                       1e-9 * std::max(1e-300, detail::eval_scale(c, std::abs(zi)));
        })) {
        z = detail::companion_roots(c);
    }
    // Newton polish (helps companion output; harmless after Aberth)
    for (auto& zi : z) {
        for (int k = 0; k < 3; ++k) {
            Cplx p = poly_eval(c, zi);
            Cplx dp = poly_eval(dc, zi);
            if (std::abs(dp) < 1e-300) break;
            Cplx step = p / dp;
            if (!(std::abs(step) < 1.0 + std::abs(zi))) break;
            zi -= step;
        }
    }
    for (std::size_t k = 0; k < zeroRoots; ++k) z.push_back(Cplx(0));
    return z;
}

}  // namespace coam
