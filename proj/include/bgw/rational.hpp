#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bgw {

// Exact rational scalar for all dyadic combinatorics. boost's cpp_rational
// keeps the canonical form (positive denominator, gcd(num, den) = 1) after
// every operation, which is exactly the contract the exact layer needs.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2^e as an exact rational, e may be negative.
inline Rational pow2_rational(long e) {
    BigInt two = 2;
    if (e >= 0)
        return Rational(boost::multiprecision::pow(two, static_cast<unsigned>(e)));
    return Rational(BigInt(1), boost::multiprecision::pow(two, static_cast<unsigned>(-e)));
}

// Integer power with rational base, non-negative exponent.
inline Rational pow_rational(const Rational& base, unsigned e) {
    Rational r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

inline Rational abs_rational(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// "p/q" (or just "p" when q == 1); the round-trip format used in CSV output.
inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational_from_string: zero denominator");
    return Rational(num, den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Doubles are dyadic rationals, so this conversion is exact.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite");
    if (x == 0.0) return Rational(0);
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e with |m| in [0.5, 1)
    auto mant = static_cast<long long>(std::ldexp(m, 53));
    return Rational(BigInt(mant)) * pow2_rational(e - 53);
}

}  // namespace bgw
