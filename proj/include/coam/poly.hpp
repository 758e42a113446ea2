#pragma once

#include "coam/common.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace coam {

/// Lattice exponent vector; one entry per variable.
using Exponent = std::vector<long long>;

struct Term {
    Exponent exp;
    Cplx coeff;
};

/// A Laurent polynomial over C in n variables, stored as a sorted term list
/// with nonzero coefficients and pairwise distinct exponents.
struct LaurentPolynomial {
    int n = 0;
    std::vector<Term> terms;  // sorted lexicographically by exponent

    const Cplx* coeff(const Exponent& e) const {
        for (const auto& t : terms)
            if (t.exp == e) return &t.coeff;
        return nullptr;
    }

    std::vector<Exponent> support() const {
        std::vector<Exponent> s;
        s.reserve(terms.size());
        for (const auto& t : terms) s.push_back(t.exp);
        return s;
    }

    static Cplx ipow(Cplx z, long long e) {
        if (e < 0) { z = Cplx(1, 0) / z; e = -e; }
        Cplx r(1, 0);
        while (e) {
            if (e & 1) r *= z;
            z *= z;
            e >>= 1;
        }
        return r;
    }

    Cplx eval(const std::vector<Cplx>& z) const {
        Cplx acc = 0;
        for (const auto& t : terms) {
            Cplx m = t.coeff;
            for (int j = 0; j < n; ++j)
                if (t.exp[j] != 0) m *= ipow(z[j], t.exp[j]);
            acc += m;
        }
        return acc;
    }
};

/// Build a polynomial from raw terms: merges duplicate exponents, drops
/// exact zero coefficients, sorts. Throws if fewer than two terms remain or
/// exponent arities disagree.
inline LaurentPolynomial make_polynomial(int n, std::vector<Term> raw) {
    std::map<Exponent, Cplx> acc;
    for (auto& t : raw) {
        if ((int)t.exp.size() != n) throw error("make_polynomial: exponent arity mismatch");
        acc[t.exp] += t.coeff;
    }
    LaurentPolynomial p;
    p.n = n;
    for (auto& [e, c] : acc) {
        if (c == Cplx(0, 0)) continue;
        p.terms.push_back({e, c});
    }
    if (p.terms.size() < 2)
        throw error("polynomial must have at least two terms with nonzero coefficients");
    return p;
}

/// Shift every exponent by `shift` (multiplication by the monomial z^shift).
/// Amoebas translate accordingly; coamoebas are unchanged as sets.
inline LaurentPolynomial translate_support(const LaurentPolynomial& p, const Exponent& shift) {
    if ((int)shift.size() != p.n) throw error("translate_support: arity mismatch");
    LaurentPolynomial q = p;
    for (auto& t : q.terms)
        for (int j = 0; j < p.n; ++j) t.exp[j] += shift[j];
    return q;
}

inline LaurentPolynomial scale_coefficients(const LaurentPolynomial& p, Cplx lambda) {
    if (lambda == Cplx(0, 0)) throw error("scale_coefficients: zero scalar");
    LaurentPolynomial q = p;
    for (auto& t : q.terms) t.coeff *= lambda;
    return q;
}

namespace detail {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    void skip_ws() { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; }
    bool eof() { skip_ws(); return i >= s.size(); }
    char peek() { skip_ws(); return i < s.size() ? s[i] : '\0'; }
    char get() { skip_ws(); return s[i++]; }
};

inline bool starts_number(char c) { return std::isdigit((unsigned char)c) || c == '.'; }

inline double parse_decimal(Cursor& cur) {
    cur.skip_ws();
    std::size_t start = cur.i;
    std::size_t j = cur.i;
    auto& s = cur.s;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    bool digits = false;
    while (j < s.size() && std::isdigit((unsigned char)s[j])) { ++j; digits = true; }
    if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit((unsigned char)s[j])) { ++j; digits = true; }
    }
    if (!digits) throw parse_error("expected a number", start);
    if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit((unsigned char)s[k])) {
            ++k;
            while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
            j = k;
        }
    }
    double v = std::strtod(s.c_str() + start, nullptr);
    cur.i = j;
    return v;
}

inline long long parse_int(Cursor& cur) {
    cur.skip_ws();
    std::size_t start = cur.i;
    std::size_t j = cur.i;
    auto& s = cur.s;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    bool digits = false;
    while (j < s.size() && std::isdigit((unsigned char)s[j])) { ++j; digits = true; }
    if (!digits) throw parse_error("expected an integer", start);
    long long v = std::strtoll(s.c_str() + start, nullptr, 10);
    cur.i = j;
    return v;
}

struct RawVar {
    int index;  // 0-based; -1 for bare z, -2 for w
    long long power;
};

}  // namespace detail

/// Parse the text grammar:
///   polynomial := term (('+'|'-') term)*
///   term       := coeff? ('*'? var ('^' int)?)*
///   var        := 'z' | 'w' | 'z' digits
///   coeff      := decimal | '(' decimal ',' decimal ')' | decimal 'i' | 'i'
/// Variables: bare z (and optionally w) for n<=2, or z1..zN. Errors carry
/// the byte offset of the offending character.
inline LaurentPolynomial parse_polynomial(const std::string& src) {
    detail::Cursor cur{src};
    struct RawTerm {
        Cplx coeff;
        std::vector<detail::RawVar> vars;
    };
    std::vector<RawTerm> raw;
    bool sawW = false;
    long long maxIndexed = 0;
    bool sawBareZ = false;

    bool first = true;
    while (!cur.eof()) {
        double sign = 1.0;
        char c = cur.peek();
        if (c == '+' || c == '-') {
            cur.get();
            sign = (c == '-') ? -1.0 : 1.0;
        } else if (!first) {
            throw parse_error("expected '+' or '-' between terms", cur.i);
        }
        first = false;
        if (cur.eof()) throw parse_error("dangling sign at end of input", cur.i);

        RawTerm term;
        term.coeff = Cplx(sign, 0);
        bool sawAnything = false;

        // optional coefficient
        c = cur.peek();
        if (c == '(') {
            cur.get();
            double re = detail::parse_decimal(cur);
            if (cur.peek() != ',') throw parse_error("expected ',' in complex coefficient", cur.i);
            cur.get();
            double im = detail::parse_decimal(cur);
            if (cur.peek() != ')') throw parse_error("expected ')' in complex coefficient", cur.i);
            cur.get();
            term.coeff *= Cplx(re, im);
            sawAnything = true;
        } else if (detail::starts_number(c)) {
            double v = detail::parse_decimal(cur);
            if (cur.i < src.size() && src[cur.i] == 'i') {
                ++cur.i;
                term.coeff *= Cplx(0, v);
            } else {
                term.coeff *= v;
            }
            sawAnything = true;
        } else if (c == 'i') {
            // lone imaginary unit; only when not followed by an identifier char
            std::size_t save = cur.i;
            cur.get();
            if (cur.i < src.size() && std::isalnum((unsigned char)src[cur.i]))
                throw parse_error("unknown identifier", save);
            term.coeff *= Cplx(0, 1);
            sawAnything = true;
        }

        // variables
        for (;;) {
            c = cur.peek();
            if (c == '*') { cur.get(); c = cur.peek(); }
            if (c != 'z' && c != 'w') break;
            std::size_t varPos = cur.i;
            cur.get();
            detail::RawVar rv{-1, 1};
            if (c == 'w') {
                rv.index = -2;
                sawW = true;
            } else if (cur.i < src.size() && std::isdigit((unsigned char)src[cur.i])) {
                long long idx = detail::parse_int(cur);
                if (idx < 1) throw parse_error("variable index must be >= 1", varPos);
                rv.index = (int)(idx - 1);
                maxIndexed = std::max(maxIndexed, idx);
            } else {
                sawBareZ = true;
            }
            if (cur.peek() == '^') {
                cur.get();
                rv.power = detail::parse_int(cur);
            }
            term.vars.push_back(rv);
            sawAnything = true;
        }
        if (!sawAnything) throw parse_error("empty term", cur.i);
        raw.push_back(std::move(term));
    }
    if (raw.empty()) throw parse_error("empty polynomial", 0);

    if (maxIndexed > 0 && (sawW || sawBareZ))
        throw parse_error("cannot mix indexed variables z1..zN with bare z/w", 0);
    int n = 1;
    if (maxIndexed > 0) n = (int)maxIndexed;
    else if (sawW) n = 2;

    std::vector<Term> terms;
    for (auto& rt : raw) {
        Term t;
        t.coeff = rt.coeff;
        t.exp.assign(n, 0);
        for (auto& rv : rt.vars) {
            int idx = rv.index == -1 ? 0 : (rv.index == -2 ? 1 : rv.index);
            t.exp[idx] += rv.power;
        }
        terms.push_back(std::move(t));
    }
    return make_polynomial(n, std::move(terms));
}

/// Canonical text form: terms in exponent-lex order, coefficients as
/// "(re,im)" with 17 significant digits. Stable across runs; used for hashes
/// and report echoes.
inline std::string to_string(const LaurentPolynomial& p) {
    std::ostringstream os;
    bool first = true;
    char buf[64];
    for (const auto& t : p.terms) {
        if (!first) os << " + ";
        first = false;
        std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", t.coeff.real(), t.coeff.imag());
        os << buf;
        for (int j = 0; j < p.n; ++j) {
            if (t.exp[j] == 0) continue;
            os << "*z" << (j + 1) << "^" << t.exp[j];
        }
    }
    return os.str();
}

/// FNV-1a 64 over the canonical text form, hex encoded.
inline std::string poly_hash(const LaurentPolynomial& p) {
    std::string s = to_string(p);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

}  // namespace coam
