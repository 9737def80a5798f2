// Exact rational arithmetic used by the oracle and the rational-mode LP path.
//
// Rat is arbitrary precision. SmallRat is a fixed-width fast path for simplex
// pivoting; it throws SmallRatOverflow instead of silently losing exactness,
// and callers fall back to Rat.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spinsys/error.hpp"

namespace spinsys {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "p/q", integers, and plain decimals ("0.25" -> 1/4). Exact.
Rat rat_from_string(const std::string& s);

// Deterministic dyadic approximation of sqrt(r), r >= 0. The result v
// satisfies |v/sqrt(r) - 1| <= 2^-60, close enough that downstream error
// ledgers absorb it.
Rat rat_sqrt_approx(const Rat& r);

struct SmallRatOverflow : std::overflow_error {
    SmallRatOverflow() : std::overflow_error("SmallRat overflow") {}
};

// int64 numerator / denominator, always reduced, denominator > 0.
struct SmallRat {
    long long n = 0;
    long long d = 1;

    SmallRat() = default;
    SmallRat(long long v) : n(v), d(1) {}
    SmallRat(long long nn, long long dd) : n(nn), d(dd) { normalize(); }

    void normalize() {
        if (d == 0) throw std::domain_error("SmallRat zero denominator");
        if (d < 0) { n = -n; d = -d; }
        if (n == 0) { d = 1; return; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        n /= g;
        d /= g;
    }

    static long long clamp128(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw SmallRatOverflow();
        return static_cast<long long>(v);
    }

    static SmallRat make128(__int128 nn, __int128 dd) {
        if (dd == 0) throw std::domain_error("SmallRat zero denominator");
        if (dd < 0) { nn = -nn; dd = -dd; }
        __int128 a = nn < 0 ? -nn : nn;
        __int128 b = dd;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a == 0) return SmallRat(0);
        SmallRat r;
        r.n = clamp128(nn / a);
        r.d = clamp128(dd / a);
        return r;
    }

    friend SmallRat operator+(const SmallRat& a, const SmallRat& b) {
        return make128((__int128)a.n * b.d + (__int128)b.n * a.d, (__int128)a.d * b.d);
    }
    friend SmallRat operator-(const SmallRat& a, const SmallRat& b) {
        return make128((__int128)a.n * b.d - (__int128)b.n * a.d, (__int128)a.d * b.d);
    }
    friend SmallRat operator*(const SmallRat& a, const SmallRat& b) {
        return make128((__int128)a.n * b.n, (__int128)a.d * b.d);
    }
    friend SmallRat operator/(const SmallRat& a, const SmallRat& b) {
        if (b.n == 0) throw std::domain_error("SmallRat division by zero");
        return make128((__int128)a.n * b.d, (__int128)a.d * b.n);
    }
    SmallRat operator-() const { SmallRat r; r.n = -n; r.d = d; return r; }
    SmallRat& operator+=(const SmallRat& o) { *this = *this + o; return *this; }
    SmallRat& operator-=(const SmallRat& o) { *this = *this - o; return *this; }
    SmallRat& operator*=(const SmallRat& o) { *this = *this * o; return *this; }
    SmallRat& operator/=(const SmallRat& o) { *this = *this / o; return *this; }

    friend bool operator==(const SmallRat& a, const SmallRat& b) { return a.n == b.n && a.d == b.d; }
    friend bool operator!=(const SmallRat& a, const SmallRat& b) { return !(a == b); }
    friend bool operator<(const SmallRat& a, const SmallRat& b) {
        return (__int128)a.n * b.d < (__int128)b.n * a.d;
    }
    friend bool operator>(const SmallRat& a, const SmallRat& b) { return b < a; }
    friend bool operator<=(const SmallRat& a, const SmallRat& b) { return !(b < a); }
    friend bool operator>=(const SmallRat& a, const SmallRat& b) { return !(a < b); }
};

inline SmallRat to_smallrat(const Rat& r) {
    const BigInt& nn = numerator(r);
    const BigInt& dd = denominator(r);
    if (nn > INT64_MAX || nn < INT64_MIN || dd > INT64_MAX) throw SmallRatOverflow();
    return SmallRat(nn.convert_to<long long>(), dd.convert_to<long long>());
}

inline Rat to_rat(const SmallRat& r) { return Rat(r.n) / r.d; }

} // namespace spinsys
