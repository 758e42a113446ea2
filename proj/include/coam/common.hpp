#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coam {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Cplx = std::complex<double>;

/// Base class for all typed failures raised by the library.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input text could not be parsed; carries a byte offset into the source.
struct parse_error : error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

/// A geometric precondition failed (degenerate span, wrong dimension, ...).
struct degenerate_error : error {
    using error::error;
};

/// A numeric routine could not certify its result within budget.
struct numeric_error : error {
    using error::error;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.1415926535897932384626433832795;

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;  // guard against fmod returning exactly 2*pi after the add
    return r;
}

/// Reduce an angle to (-pi, pi].
inline double wrap_signed(double a) {
    double r = wrap_angle(a);
    return r > kPi ? r - kTwoPi : r;
}

inline double rat_to_double(const Rat& q) { return q.convert_to<double>(); }

/// Best rational approximation of x with denominator bounded by `maxDen`
/// (continued fraction expansion). Exact for representable dyadics that fit.
inline Rat rationalize(double x, const BigInt& maxDen = BigInt(1) << 40) {
    if (!std::isfinite(x)) throw numeric_error("rationalize: non-finite input");
    bool neg = x < 0;
    double v = neg ? -x : x;
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        if (fl > 9.2e18) break;
        BigInt a = static_cast<long long>(fl);
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > maxDen) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-18) break;
        frac = 1.0 / rem;
    }
    if (q1 == 0) { p1 = p0; q1 = q0; }
    Rat r(p1, q1);
    return neg ? Rat(-r) : r;
}

inline long long gcd_ll(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { long long t = a % b; a = b; b = t; }
    return a;
}

/// gcd of the entries; 0 for the zero vector.
inline long long content(const std::vector<long long>& v) {
    long long g = 0;
    for (long long x : v) g = gcd_ll(g, x);
    return g;
}

/// Divide by the content so the first nonzero entry stays the sign it has.
inline std::vector<long long> primitive(std::vector<long long> v) {
    long long g = content(v);
    if (g > 1) for (auto& x : v) x /= g;
    return v;
}

/// Flip sign so the first nonzero entry is positive. Identity on zero.
inline std::vector<long long> sign_normalize(std::vector<long long> v) {
    for (long long x : v) {
        if (x > 0) break;
        if (x < 0) { for (auto& y : v) y = -y; break; }
    }
    return v;
}

}  // namespace coam
