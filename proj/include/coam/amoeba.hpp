#pragma once

#include <coam/poly.hpp>
#include <coam/polytope.hpp>
#include <coam/roots.hpp>
#include <coam/rng.hpp>
#include <coam/subdivision.hpp>
#include <coam/tropical.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace coam {

/// Coefficients of the restriction of p to the line where all variables but
/// z_j are frozen: p(...,z_j,...) = z_j^kmin * sum_i c[i] z_j^i. Returns the
/// coefficient array and kmin. Frozen values must be nonzero.
inline std::pair<std::vector<Cplx>, long long> slice_coefficients(
    const LaurentPolynomial& p, int j, const std::vector<Cplx>& fixed) {
    if (j < 0 || j >= p.n) throw error("slice_coefficients: variable index out of range");
    if ((int)fixed.size() != p.n) throw error("slice_coefficients: arity mismatch");
    for (int i = 0; i < p.n; ++i)
        if (i != j && fixed[i] == Cplx(0, 0))
            throw error("slice_coefficients: frozen value must lie in C*");
    long long kmin = p.terms.front().exp[j], kmax = kmin;
    for (const auto& t : p.terms) {
        kmin = std::min(kmin, t.exp[j]);
        kmax = std::max(kmax, t.exp[j]);
    }
    std::vector<Cplx> c(std::size_t(kmax - kmin + 1), Cplx(0, 0));
    for (const auto& t : p.terms) {
        Cplx m = t.coeff;
        for (int i = 0; i < p.n; ++i)
            if (i != j && t.exp[i] != 0) m *= LaurentPolynomial::ipow(fixed[i], t.exp[i]);
        c[std::size_t(t.exp[j] - kmin)] += m;
    }
    return {std::move(c), kmin};
}

/// Roots in C* of the univariate slice in variable j. The Laurent monomial
/// factor z_j^kmin carries no C* roots and is dropped; exact zero roots of the
/// residual polynomial are excluded as well. Throws degenerate_error when the
/// slice vanishes identically on the chosen line.
inline std::vector<Cplx> solve_slice(const LaurentPolynomial& p, int j,
                                     const std::vector<Cplx>& fixed) {
    auto [c, kmin] = slice_coefficients(p, j, fixed);
    (void)kmin;
    bool allZero = true;
    for (const auto& v : c) allZero &= (v == Cplx(0, 0));
    if (allZero) throw degenerate_error("solve_slice: restriction vanishes identically");
    std::vector<Cplx> roots = poly_roots(c), out;
    for (const auto& r : roots)
        if (std::abs(r) > 0) out.push_back(r);
    return out;
}

/// Lopsidedness at x: one term modulus strictly exceeds the sum of all
/// others on the fiber torus. Certifies x outside the amoeba with the
/// dominating exponent as the order of its complement component.
inline std::optional<Exponent> lopsided_order(const LaurentPolynomial& p,
                                              const std::vector<double>& x,
                                              double* margin = nullptr) {
    std::size_t best = 0;
    std::vector<double> L(p.terms.size());
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
        double v = std::log(std::abs(p.terms[i].coeff));
        for (int j = 0; j < p.n; ++j) v += (double)p.terms[i].exp[j] * x[j];
        L[i] = v;
        if (v > L[best]) best = i;
    }
    double m2 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < L.size(); ++i)
        if (i != best) m2 = std::max(m2, L[i]);
    double s = 0;
    for (std::size_t i = 0; i < L.size(); ++i)
        if (i != best) s += std::exp(L[i] - m2);
    double rest = m2 + std::log(s);
    if (margin) *margin = L[best] - rest;
    if (L[best] > rest) return p.terms[best].exp;
    return std::nullopt;
}

struct OrderOptions {
    int fibers = 9;
    std::uint64_t seed = 42;
    double modulusGuardRel = 1e-9;
};

/// The order of the complement component containing Log^{-1}-fiber of x,
/// computed coordinatewise by the argument principle: roots of the slice in
/// z_j inside the circle of radius e^{x_j}, offset by the Laurent valuation.
/// Counts must agree over every random fiber; any root modulus within the
/// relative guard of the circle, or any disagreement, yields nullopt.
inline std::optional<Exponent> order_at_point(const LaurentPolynomial& p,
                                              const std::vector<double>& x,
                                              const OrderOptions& opts = {}) {
    if ((int)x.size() != p.n) throw error("order_at_point: arity mismatch");
    Rng rng{opts.seed};
    Exponent ord(p.n, 0);
    int fibers = p.n == 1 ? 1 : std::max(1, opts.fibers);
    for (int j = 0; j < p.n; ++j) {
        double R = std::exp(x[j]);
        std::optional<long long> agreed;
        for (int f = 0; f < fibers; ++f) {
            std::vector<Cplx> fixed(p.n);
            for (int i = 0; i < p.n; ++i) {
                if (i == j) continue;
                double th = kTwoPi * rng.uniform(((std::uint64_t)j * 0x10001 + f) * 0x101 + i, 0);
                fixed[i] = std::polar(std::exp(x[i]), th);
            }
            std::vector<Cplx> c;
            long long kmin;
            try {
                std::tie(c, kmin) = slice_coefficients(p, j, fixed);
            } catch (const error&) {
                return std::nullopt;
            }
            bool allZero = true;
            for (const auto& v : c) allZero &= (v == Cplx(0, 0));
            if (allZero) return std::nullopt;
            long long inside = 0;
            for (const auto& r : poly_roots(c)) {
                double m = std::abs(r);
                if (std::abs(m - R) <= opts.modulusGuardRel * R) return std::nullopt;
                if (m < R) ++inside;
            }
            long long o = kmin + inside;
            if (agreed && *agreed != o) return std::nullopt;
            agreed = o;
        }
        ord[j] = *agreed;
    }
    return ord;
}

enum class Membership { inside, outside, boundaryUncertain };

struct MembershipResult {
    Membership verdict = Membership::boundaryUncertain;
    std::optional<Exponent> order;  // set for certified outside points
};

/// Amoeba membership test. Outside is claimed only on a lopsidedness
/// certificate. Inside is claimed when a slice root modulus matches e^{x_j}
/// within tol, or when root counts disagree across fibers. Everything else is
/// reported boundary-uncertain.
inline MembershipResult amoeba_membership(const LaurentPolynomial& p,
                                          const std::vector<double>& x, double tol = 1e-6,
                                          const OrderOptions& opts = {}) {
    if ((int)x.size() != p.n) throw error("amoeba_membership: arity mismatch");
    if (auto dom = lopsided_order(p, x)) return {Membership::outside, dom};
    Rng rng{opts.seed};
    int fibers = p.n == 1 ? 1 : std::max(1, opts.fibers);
    for (int j = 0; j < p.n; ++j) {
        double R = std::exp(x[j]);
        std::optional<long long> agreed;
        for (int f = 0; f < fibers; ++f) {
            std::vector<Cplx> fixed(p.n);
            for (int i = 0; i < p.n; ++i) {
                if (i == j) continue;
                double th = kTwoPi * rng.uniform(((std::uint64_t)j * 0x10001 + f) * 0x101 + i, 0);
                fixed[i] = std::polar(std::exp(x[i]), th);
            }
            std::vector<Cplx> c;
            long long kmin;
            try {
                std::tie(c, kmin) = slice_coefficients(p, j, fixed);
            } catch (const error&) {
                return {Membership::boundaryUncertain, std::nullopt};
            }
            bool allZero = true;
            for (const auto& v : c) allZero &= (v == Cplx(0, 0));
            if (allZero) return {Membership::inside, std::nullopt};
            long long inside = 0;
            for (const auto& r : poly_roots(c)) {
                double m = std::abs(r);
                if (std::abs(m - R) <= tol * std::max(R, m)) return {Membership::inside, std::nullopt};
                if (m < R) ++inside;
            }
            if (agreed && *agreed != kmin + inside) return {Membership::inside, std::nullopt};
            agreed = kmin + inside;
        }
    }
    return {Membership::boundaryUncertain, std::nullopt};
}

struct OrderComponent {
    Exponent order;
    std::vector<double> representative;
    bool bounded = false;
    bool lopsidedCertified = false;
    double margin = 0;  // lopsidedness margin at the representative
};

struct OrderMapReport {
    std::vector<OrderComponent> components;  // sorted by order, one per order
    std::vector<Exponent> imageOfOrder;      // sorted
    NewtonPolytope polytope;
    std::vector<double> boxLo, boxHi;
    std::vector<std::string> warnings;

    const OrderComponent* find(const Exponent& a) const {
        for (const auto& c : components)
            if (c.order == a) return &c;
        return nullptr;
    }
};

struct OrderMapOptions {
    int gridPerAxis = 33;
    OrderOptions order;
    bool vertexProbes = true;
    /// Dense re-certification for orders never seen lopsided: more fibers and
    /// a generous modulus guard, so pinched fibers (all slice roots hugging
    /// the torus) cannot fake a complement component by unanimity.
    OrderOptions verify{33, 43, 2e-2};
    int verifyCandidates = 8;
};

/// Scan a log-space box for complement components, keyed by order. Vertex
/// orders are additionally chased far out along the sum of outward facet
/// normals, where lopsidedness eventually certifies them. Components are
/// bounded exactly when their order is interior to the Newton polytope.
inline OrderMapReport order_map_report(const LaurentPolynomial& p,
                                       const std::vector<double>& boxLo,
                                       const std::vector<double>& boxHi,
                                       const OrderMapOptions& opts = {}) {
    if ((int)boxLo.size() != p.n || (int)boxHi.size() != p.n)
        throw error("order_map_report: box arity mismatch");
    OrderMapReport rep;
    rep.polytope = newton_polytope(p);
    rep.boxLo = boxLo;
    rep.boxHi = boxHi;
    if (rep.polytope.degenerate)
        throw degenerate_error("order_map_report: Newton polytope is not full dimensional");

    std::map<Exponent, OrderComponent> found;
    std::map<Exponent, std::vector<std::pair<double, std::vector<double>>>> candidates;
    auto record = [&](const Exponent& ord, const std::vector<double>& x, bool lops, double margin) {
        if (!rep.polytope.contains(ord)) {
            rep.warnings.push_back("discarded an order outside the Newton polytope");
            return;
        }
        if (!lops) candidates[ord].push_back({margin, x});
        auto it = found.find(ord);
        if (it == found.end()) {
            found[ord] = {ord, x, !rep.polytope.on_boundary(ord), lops, margin};
            return;
        }
        OrderComponent& c = it->second;
        if ((lops && !c.lopsidedCertified) || (lops == c.lopsidedCertified && margin > c.margin)) {
            c.representative = x;
            c.lopsidedCertified = lops;
            c.margin = margin;
        }
    };

    if (opts.vertexProbes) {
        for (const auto& v : rep.polytope.vertices) {
            IntVec d(p.n, 0);
            for (const auto& fc : rep.polytope.facets)
                if (idot(fc.normal, v) == fc.offset)
                    for (int j = 0; j < p.n; ++j) d[j] -= fc.normal[j];
            double nrm = 0;
            for (int j = 0; j < p.n; ++j) nrm += (double)d[j] * d[j];
            if (nrm == 0) continue;
            nrm = std::sqrt(nrm);
            for (double r : {4.0, 8.0, 16.0, 32.0}) {
                std::vector<double> x(p.n);
                for (int j = 0; j < p.n; ++j) x[j] = r * d[j] / nrm;
                double margin = 0;
                auto dom = lopsided_order(p, x, &margin);
                if (dom && *dom == v) {
                    record(v, x, true, margin);
                    break;
                }
            }
        }
    }

    int G = std::max(2, opts.gridPerAxis);
    std::vector<int> idx(p.n, 0);
    for (;;) {
        std::vector<double> x(p.n);
        for (int j = 0; j < p.n; ++j)
            x[j] = boxLo[j] + (boxHi[j] - boxLo[j]) * idx[j] / double(G - 1);
        double margin = 0;
        if (auto dom = lopsided_order(p, x, &margin)) {
            record(*dom, x, true, margin);
        } else if (auto ord = order_at_point(p, x, opts.order)) {
            record(*ord, x, false, margin);
        }
        int j = 0;
        while (j < p.n && ++idx[j] == G) idx[j++] = 0;
        if (j == p.n) break;
    }

    for (auto& [o, c] : found) {
        if (!c.lopsidedCertified) {
            auto& cand = candidates[o];
            std::sort(cand.begin(), cand.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            bool certified = false;
            int tried = 0;
            for (const auto& [m, x] : cand) {
                if (tried++ >= opts.verifyCandidates) break;
                auto v = order_at_point(p, x, opts.verify);
                if (v && *v == o) {
                    certified = true;
                    c.representative = x;
                    c.margin = m;
                    break;
                }
            }
            if (!certified) {
                std::string s = "(";
                for (int j = 0; j < p.n; ++j) s += (j ? "," : "") + std::to_string(o[j]);
                rep.warnings.push_back("order " + s +
                                       "): no winding-certified witness; dropped");
                continue;
            }
        }
        rep.components.push_back(c);
        rep.imageOfOrder.push_back(o);
    }
    return rep;
}

struct PhiEstimate {
    Exponent alpha;
    double cAlpha = 0;    // Re Phi_alpha: mean log|f| on the fiber minus <alpha, x>
    double imPhase = 0;   // Im Phi_alpha reduced to [0, 2pi)
    double stdError = 0;  // Monte Carlo standard error of cAlpha
    long long samples = 0;
    int gridPerAxis = 0;
};

struct PhiOptions {
    long long samples = 200000;
    std::uint64_t seed = 42;
    int gridPerAxis = 0;  // 0: 256 per axis for n <= 2, 64 for n = 3
    int gridRetries = 2;  // double the grid on winding failure this many times
};

namespace detail {

/// Unwrapped mean of arg(f(e^{x+i theta}) e^{-i<alpha,theta>}) over a regular
/// grid on the fiber torus, certified by zero winding along every axis line.
/// Throws numeric_error when a winding is nonzero or a step is too steep.
inline double phi_im_on_grid(const LaurentPolynomial& p, const Exponent& alpha,
                             const std::vector<double>& x, int M) {
    int n = p.n;
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= (std::size_t)M;
    std::vector<double> val(total), lift(total);
    std::vector<Cplx> z(n);
    std::vector<std::size_t> stride(n, 1);
    for (int j = 1; j < n; ++j) stride[j] = stride[j - 1] * (std::size_t)M;

    std::vector<int> idx(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double shift = 0;
        for (int j = 0; j < n; ++j) {
            double th = kTwoPi * idx[j] / M;
            z[j] = std::polar(std::exp(x[j]), th);
            shift += (double)alpha[j] * th;
        }
        Cplx w = p.eval(z) * std::polar(1.0, -shift);
        if (w == Cplx(0, 0)) throw numeric_error("phi_alpha: f vanishes on the fiber torus");
        val[flat] = std::arg(w);
        int j = 0;
        while (j < n && ++idx[j] == M) idx[j++] = 0;
    }

    // per-axis winding certification on every grid line
    for (int ax = 0; ax < n; ++ax) {
        std::size_t lines = total / (std::size_t)M;
        std::vector<int> rest(n, 0);
        for (std::size_t l = 0; l < lines; ++l) {
            std::size_t base = 0;
            {
                int k = 0;
                for (int j = 0; j < n; ++j) {
                    if (j == ax) continue;
                    base += (std::size_t)rest[k] * stride[j];
                    ++k;
                }
            }
            double acc = 0;
            for (int i = 0; i < M; ++i) {
                double a = val[base + (std::size_t)i * stride[ax]];
                double b = val[base + (std::size_t)((i + 1) % M) * stride[ax]];
                double d = wrap_signed(b - a);
                if (std::abs(d) > 3.0) throw numeric_error("phi_alpha: grid too coarse for unwrapping");
                acc += d;
            }
            if (std::abs(acc) > kPi) throw numeric_error("phi_alpha: nonzero winding on the fiber");
            int k = 0;
            int nRest = n - 1;
            while (k < nRest && ++rest[k] == M) rest[k++] = 0;
        }
    }

    // consistent lift: unwrap axis 0 along the first line, then each axis in
    // turn over the already-lifted lower-dimensional slab
    lift[0] = val[0];
    for (int ax = 0; ax < n; ++ax) {
        std::size_t slab = stride[ax];  // entries already lifted
        for (std::size_t b = 0; b < slab; ++b)
            for (int i = 1; i < M; ++i) {
                std::size_t prev = b + (std::size_t)(i - 1) * stride[ax];
                std::size_t cur = b + (std::size_t)i * stride[ax];
                lift[cur] = lift[prev] + wrap_signed(val[cur] - val[prev]);
            }
    }
    double mean = 0;
    for (double v : lift) mean += v;
    return mean / (double)total;
}

}  // namespace detail

/// Estimate Phi_alpha(f) at a complement point x: the real part by Monte
/// Carlo integration of log|f| over the fiber torus, the imaginary part by
/// path-unwrapping arg(f/z^alpha) on a regular grid with winding checks.
inline PhiEstimate phi_alpha(const LaurentPolynomial& p, const Exponent& alpha,
                             const std::vector<double>& x, const PhiOptions& opts = {}) {
    if ((int)alpha.size() != p.n || (int)x.size() != p.n) throw error("phi_alpha: arity mismatch");
    if (p.n > 3) throw error("phi_alpha: supported for n <= 3");
    PhiEstimate est;
    est.alpha = alpha;
    est.samples = std::max<long long>(opts.samples, 16);

    Rng rng{opts.seed};
    double mean = 0, m2 = 0;
    long long good = 0;
    std::vector<Cplx> z(p.n);
    for (long long s = 0; s < est.samples; ++s) {
        for (int j = 0; j < p.n; ++j)
            z[j] = std::polar(std::exp(x[j]), kTwoPi * rng.uniform(j + 1, (std::uint64_t)s));
        double a = std::abs(p.eval(z));
        if (!(a > 0) || !std::isfinite(a)) continue;
        ++good;
        double v = std::log(a), d = v - mean;
        mean += d / (double)good;
        m2 += d * (v - mean);
    }
    if (good < est.samples / 2) throw numeric_error("phi_alpha: too many vanishing fiber samples");
    double dot = 0;
    for (int j = 0; j < p.n; ++j) dot += (double)alpha[j] * x[j];
    est.cAlpha = mean - dot;
    est.stdError = good > 1 ? std::sqrt(m2 / ((double)good * (good - 1))) : 0;

    int M = opts.gridPerAxis > 0 ? opts.gridPerAxis : (p.n <= 2 ? 256 : 64);
    for (int attempt = 0;; ++attempt) {
        try {
            est.imPhase = wrap_angle(detail::phi_im_on_grid(p, alpha, x, M));
            est.gridPerAxis = M;
            break;
        } catch (const numeric_error&) {
            if (attempt >= opts.gridRetries || (p.n == 3 && M >= 128)) throw;
            M *= 2;
        }
    }
    return est;
}

struct ClassifyOptions {
    int phases = 16;
    std::vector<double> epsilons = {1e-1, 1e-2, 1e-3};
    std::uint64_t seed = 42;
    std::vector<double> boxLo, boxHi;  // component search box; defaults to [-8,8]^n
    long long phiSamples = 20000;
    OrderOptions order;
};

struct IndexTypeResult {
    Exponent beta;
    bool typeI = false;
    bool heuristic = true;  // finite phase/epsilon probing only
    double probePhase = 0;  // Im Phi_beta of the perturbed f at the smallest epsilon
    bool probePhaseValid = false;
    int phaseIndex = -1;    // which phase grid index certified type I
    std::vector<double> witness;
};

namespace detail {

/// Search for a point whose complement-component order is beta. Guided by the
/// tropical margin landscape of the coefficient moduli, which peaks at the
/// center of the component even when the component is thin.
inline std::optional<std::vector<double>> find_order_witness(const LaurentPolynomial& p,
                                                             const Exponent& beta,
                                                             const std::vector<double>& lo,
                                                             const std::vector<double>& hi,
                                                             const OrderOptions& oopts) {
    int n = p.n;
    if (n == 1) {
        auto [c, kmin] = slice_coefficients(p, 0, {Cplx(1, 0)});
        std::vector<double> m;
        for (const auto& r : poly_roots(c)) m.push_back(std::abs(r));
        std::sort(m.begin(), m.end());
        long long t = beta[0] - kmin;
        long long N = (long long)m.size();
        if (t < 0 || t > N) return std::nullopt;
        double loR, hiR;
        if (t == 0) {
            if (N == 0 || m.front() <= 0) return std::nullopt;
            hiR = m.front();
            loR = hiR / 4;
        } else if (t == N) {
            loR = m.back();
            hiR = loR * 4;
        } else {
            loR = m[std::size_t(t - 1)];
            hiR = m[std::size_t(t)];
            if (!(hiR - loR > 1e-12 * std::max(1.0, hiR))) return std::nullopt;
            if (loR <= 0) loR = hiR / 16;
        }
        return std::vector<double>{(std::log(loR) + std::log(hiR)) / 2};
    }

    std::size_t ib = p.terms.size();
    for (std::size_t i = 0; i < p.terms.size(); ++i)
        if (p.terms[i].exp == beta) ib = i;
    if (ib == p.terms.size()) return std::nullopt;
    auto margin = [&](const std::vector<double>& x) {
        double mb = std::log(std::abs(p.terms[ib].coeff));
        for (int j = 0; j < n; ++j) mb += (double)beta[j] * x[j];
        double other = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p.terms.size(); ++i) {
            if (i == ib) continue;
            double v = std::log(std::abs(p.terms[i].coeff));
            for (int j = 0; j < n; ++j) v += (double)p.terms[i].exp[j] * x[j];
            other = std::max(other, v);
        }
        return mb - other;
    };

    std::vector<double> best, cLo = lo, cHi = hi;
    int G = n == 2 ? 17 : 9;
    for (int round = 0; round < 4; ++round) {
        double bestVal = -std::numeric_limits<double>::infinity();
        std::vector<int> idx(n, 0);
        for (;;) {
            std::vector<double> x(n);
            for (int j = 0; j < n; ++j)
                x[j] = cLo[j] + (cHi[j] - cLo[j]) * idx[j] / double(G - 1);
            double v = margin(x);
            if (v > bestVal) {
                bestVal = v;
                best = x;
            }
            int j = 0;
            while (j < n && ++idx[j] == G) idx[j++] = 0;
            if (j == n) break;
        }
        std::vector<double> nLo(n), nHi(n);
        for (int j = 0; j < n; ++j) {
            double w = (cHi[j] - cLo[j]) / 4;
            nLo[j] = best[j] - w / 2;
            nHi[j] = best[j] + w / 2;
        }
        cLo = nLo;
        cHi = nHi;
    }

    double h = (hi[0] - lo[0]) / 64;
    std::vector<std::vector<double>> cand{best};
    for (int j = 0; j < n; ++j)
        for (double s : {-h, h}) {
            auto x = best;
            x[j] += s;
            cand.push_back(x);
        }
    for (const auto& x : cand) {
        if (auto dom = lopsided_order(p, x); dom && *dom == beta) return x;
        if (auto ord = order_at_point(p, x, oopts); ord && *ord == beta) return x;
    }
    return std::nullopt;
}

/// Exact Im Phi_beta for univariate f from its roots: the mean of
/// arg(f/z^beta) over the circle |z| = e^x picks up arg(r) + pi from every
/// root outside the circle, plus the argument of the leading coefficient.
/// Robust where a grid unwrap is not (arbitrarily thin annuli).
inline double phi_im_roots(const LaurentPolynomial& p, const Exponent& beta, double x) {
    if (p.n != 1) throw error("phi_im_roots: univariate only");
    auto [c, kmin] = slice_coefficients(p, 0, {Cplx(1, 0)});
    std::size_t top = c.size();
    while (top > 0 && c[top - 1] == Cplx(0, 0)) --top;
    c.resize(top);
    if (c.empty()) throw degenerate_error("phi_im_roots: zero polynomial");
    double R = std::exp(x), acc = std::arg(c.back());
    long long inside = 0;
    for (const auto& r : poly_roots(c)) {
        if (std::abs(r) > R)
            acc += std::arg(r) + kPi;
        else
            ++inside;
    }
    if (kmin + inside != beta[0])
        throw numeric_error("phi_im_roots: x is not in a component of the requested order");
    return wrap_angle(acc);
}

}  // namespace detail

/// Heuristic type I / type II classification of an index beta outside the
/// order image: perturb the beta coefficient to eps*c*a (or inject
/// eps*c*scale*z^beta when a_beta = 0, with scale the median coefficient
/// modulus), and ask whether some phase c on a uniform grid keeps beta inside
/// the order image for every eps. Type I records the probe-limit phase.
inline IndexTypeResult classify_index_type(const LaurentPolynomial& p, const Exponent& beta,
                                           const ClassifyOptions& opts = {}) {
    if ((int)beta.size() != p.n) throw error("classify_index_type: arity mismatch");
    IndexTypeResult res;
    res.beta = beta;
    std::vector<double> lo = opts.boxLo, hi = opts.boxHi;
    if ((int)lo.size() != p.n || (int)hi.size() != p.n) {
        lo.assign(p.n, -8.0);
        hi.assign(p.n, 8.0);
    }

    const Cplx* cur = p.coeff(beta);
    double scale = 1;
    if (!cur) {
        std::vector<double> mods;
        for (const auto& t : p.terms) mods.push_back(std::abs(t.coeff));
        std::sort(mods.begin(), mods.end());
        scale = mods[mods.size() / 2];
    }

    for (int k = 0; k < opts.phases; ++k) {
        Cplx c = std::polar(1.0, kTwoPi * k / opts.phases);
        bool ok = true;
        std::vector<double> witness;
        LaurentPolynomial lastPert;
        for (double eps : opts.epsilons) {
            Cplx newCoeff = cur ? eps * c * (*cur) : eps * c * scale;
            std::vector<Term> terms;
            for (const auto& t : p.terms)
                if (t.exp != beta) terms.push_back(t);
            terms.push_back({beta, newCoeff});
            LaurentPolynomial q = make_polynomial(p.n, terms);
            auto w = detail::find_order_witness(q, beta, lo, hi, opts.order);
            if (!w) {
                ok = false;
                break;
            }
            witness = *w;
            lastPert = q;
        }
        if (!ok) continue;
        res.typeI = true;
        res.phaseIndex = k;
        res.witness = witness;
        try {
            if (p.n == 1) {
                res.probePhase = detail::phi_im_roots(lastPert, beta, witness[0]);
            } else {
                PhiOptions po;
                po.samples = opts.phiSamples;
                po.seed = opts.seed;
                res.probePhase = phi_alpha(lastPert, beta, witness, po).imPhase;
            }
            res.probePhaseValid = true;
        } catch (const numeric_error&) {
            res.probePhaseValid = false;
        }
        return res;
    }
    return res;
}

enum class NuKind { orderImage, typeOne, typeTwo };

struct NuEntry {
    double nu1 = 0;  // generalized height: -c_alpha on the order image
    double nu2 = 0;  // phase angle of the unit coefficient nu_2(alpha)
    NuKind kind = NuKind::orderImage;
    bool heuristic = false;
    double affineGap = 0;  // height above the lower envelope (order image only)
};

struct NuAssignment {
    int n = 0;
    std::map<Exponent, NuEntry> entries;
    std::vector<std::string> warnings;

    Lifting to_lifting() const {
        Lifting l;
        for (const auto& [e, v] : entries) l.entries[e] = {v.nu1, v.nu2};
        return l;
    }
};

struct AssembleOptions {
    bool vertexClosedForm = true;  // exact log|a|, arg(a) at Newton vertices
    double affineGapWarn = 5e-2;
    ClassifyOptions classify;
};

/// Assemble the generalized lift nu over supp(f) union Im(ord): measured
/// (-c_alpha, Im Phi_alpha) on the order image, the affine extension of the
/// envelope with the probe-limit phase for type I indices, envelope + 1 with
/// phase of unity for type II. Every order-image point must come with a Phi
/// estimate; typing may be precomputed and passed in, otherwise it is run
/// here with the supplied options.
inline NuAssignment assemble_nu(const LaurentPolynomial& p, const OrderMapReport& report,
                                const std::map<Exponent, PhiEstimate>& phis,
                                const RegularSubdivision& sd, const AssembleOptions& opts = {},
                                const std::map<Exponent, IndexTypeResult>* typing = nullptr) {
    NuAssignment nu;
    nu.n = p.n;
    std::vector<Exponent> domain = p.support();
    for (const auto& o : report.imageOfOrder) domain.push_back(o);
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

    for (const auto& a : domain) {
        bool inImage = std::binary_search(report.imageOfOrder.begin(), report.imageOfOrder.end(), a);
        NuEntry e;
        if (inImage) {
            auto it = phis.find(a);
            if (it == phis.end()) throw error("assemble_nu: missing Phi estimate for an order-image point");
            e.nu1 = -it->second.cAlpha;
            e.nu2 = it->second.imPhase;
            const Cplx* ca = p.coeff(a);
            if (opts.vertexClosedForm && ca && report.polytope.is_vertex(a)) {
                e.nu1 = -std::log(std::abs(*ca));
                e.nu2 = wrap_angle(std::arg(*ca));
            }
            e.kind = NuKind::orderImage;
            double env = rat_to_double(envelope_value(sd, a));
            e.affineGap = std::max(0.0, e.nu1 - env);
            if (e.affineGap > opts.affineGapWarn)
                nu.warnings.push_back("order-image point sits above the lower envelope");
        } else {
            IndexTypeResult t;
            if (typing && typing->count(a)) {
                t = typing->at(a);
            } else {
                ClassifyOptions co = opts.classify;
                if ((int)co.boxLo.size() != p.n) {
                    co.boxLo = report.boxLo;
                    co.boxHi = report.boxHi;
                }
                t = classify_index_type(p, a, co);
            }
            double env = rat_to_double(envelope_value(sd, a));
            e.heuristic = true;
            if (t.typeI) {
                e.kind = NuKind::typeOne;
                e.nu1 = env;
                e.nu2 = t.probePhaseValid ? t.probePhase : 0;
                if (!t.probePhaseValid)
                    nu.warnings.push_back("type I phase probe failed; defaulted the phase to 0");
            } else {
                e.kind = NuKind::typeTwo;
                e.nu1 = env + 1;
                e.nu2 = 0;
            }
        }
        nu.entries[a] = e;
    }
    return nu;
}

/// Coefficient deformation f_t = sum a_alpha (t e)^{nu_1(alpha)} z^alpha for
/// t in (0, 1/e]; recovers f exactly at t = 1/e.
inline LaurentPolynomial deformation_family(const LaurentPolynomial& p, const NuAssignment& nu,
                                            double t) {
    double u = t * std::exp(1.0);
    if (!(t > 0) || u > 1 + 1e-12) throw error("deformation_family: t must lie in (0, 1/e]");
    if (std::abs(u - 1) <= 1e-12) return p;
    std::vector<Term> terms;
    for (const auto& tm : p.terms) {
        auto it = nu.entries.find(tm.exp);
        if (it == nu.entries.end()) throw error("deformation_family: nu misses a support point");
        terms.push_back({tm.exp, tm.coeff * std::pow(u, it->second.nu1)});
    }
    return make_polynomial(p.n, terms);
}

/// Interpolation toward the nu_2 phase polynomial over the full index set of
/// nu: coefficients e^{nu_1} u^{nu_1} (e u a_alpha + (1 - e u) nu_2(alpha)),
/// u in (0, 1/e]; reduces to f at u = 1/e. When t is supplied the base
/// coefficients are taken from the deformation family f_t instead of f.
inline LaurentPolynomial tilde_family(const LaurentPolynomial& p, const NuAssignment& nu, double u,
                                      std::optional<double> t = std::nullopt) {
    double eu = u * std::exp(1.0);
    if (!(u > 0) || eu > 1 + 1e-12) throw error("tilde_family: u must lie in (0, 1/e]");
    for (const auto& tm : p.terms)
        if (!nu.entries.count(tm.exp)) throw error("tilde_family: nu misses a support point");
    double tFac = 1;
    if (t) {
        tFac = *t * std::exp(1.0);
        if (!(*t > 0) || tFac > 1 + 1e-12) throw error("tilde_family: t must lie in (0, 1/e]");
    }
    bool atOne = std::abs(eu - 1) <= 1e-12;
    std::vector<Term> terms;
    for (const auto& [e, v] : nu.entries) {
        const Cplx* ca = p.coeff(e);
        Cplx base = ca ? *ca : Cplx(0, 0);
        if (t && !(std::abs(tFac - 1) <= 1e-12)) base *= std::pow(tFac, v.nu1);
        Cplx coeff = atOne ? base
                           : std::pow(eu, v.nu1) *
                                 (eu * base + (1 - eu) * std::polar(1.0, v.nu2));
        if (std::abs(coeff) < 1e-300) continue;
        terms.push_back({e, coeff});
    }
    return make_polynomial(p.n, terms);
}

}  // namespace coam
