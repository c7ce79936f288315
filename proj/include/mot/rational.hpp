#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "mot/errors.hpp"

namespace mot {

// Exact arithmetic scalar for `--exact` mode. All core algorithms are
// templated on the scalar type; they are instantiated for `double` and for
// `Rational`.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    // Default tolerances; callers may override per operation.
    static double order_tol() { return 1e-9; }
    static double feas_tol() { return 1e-9; }
    // Remainder masses below this (relative to total mass) are pruned after
    // shadow subtraction in float mode.
    static double prune_eps() { return 1e-14; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational order_tol() { return 0; }
    static Rational feas_tol() { return 0; }
    static Rational prune_eps() { return 0; }
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

template <class T>
inline T abs_value(const T& x) {
    return x < T(0) ? T(-x) : x;
}

// Parses "p/q", plain integers, and decimal literals ("-0.25", "1e-3") into
// an exact rational. Used by the JSON layer when exact mode is requested.
Rational parse_rational(const std::string& text);

// Canonical "p" or "p/q" rendering.
std::string format_rational(const Rational& q);

// ---------------------------------------------------------------------------

inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal", 0);
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt num(text.substr(0, slash));
            BigInt den(text.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + text + "'", slash + 1);
            return Rational(num, den);
        }
        // Decimal / scientific literal. Split into mantissa and exponent and
        // scale by powers of ten so the value is exact.
        std::string mant = text;
        long exp10 = 0;
        auto epos = text.find_first_of("eE");
        if (epos != std::string::npos) {
            mant = text.substr(0, epos);
            exp10 = std::stol(text.substr(epos + 1));
        }
        auto dot = mant.find('.');
        if (dot != std::string::npos) {
            exp10 -= static_cast<long>(mant.size() - dot - 1);
            mant.erase(dot, 1);
        }
        if (mant.empty() || mant == "-" || mant == "+")
            throw ParseError("malformed rational literal '" + text + "'", 0);
        BigInt num(mant);
        Rational q(num);
        BigInt scale = 1;
        for (long i = 0; i < std::labs(exp10); ++i) scale *= 10;
        if (exp10 >= 0)
            q *= Rational(scale);
        else
            q /= Rational(scale);
        return q;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed rational literal '" + text + "'", 0);
    }
}

inline std::string format_rational(const Rational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

}  // namespace mot
