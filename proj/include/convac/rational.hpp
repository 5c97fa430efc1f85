#ifndef CONVAC_RATIONAL_HPP
#define CONVAC_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace convac {

// Exact scalar type used throughout the library. GMP keeps rationals in
// canonical reduced form with a positive denominator, which the rank and
// construction code relies on for exact comparisons.
using Rational = mpq_class;
using BigInt = mpz_class;

// The (num, den) constructor of mpq_class stores its arguments verbatim;
// always build two-argument rationals through here so values stay reduced.
inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational value(num, den);
    value.canonicalize();
    return value;
}

// Parses "p", "-p", or "p/q". Throws std::invalid_argument on malformed input
// or a zero denominator.
inline Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    mpq_class value;
    if (value.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + text + "'");
    if (value.get_den() == 0)
        throw std::invalid_argument("zero denominator in rational literal: '" + text + "'");
    value.canonicalize();
    return value;
}

// Renders as "p" for integers and "p/q" otherwise.
inline std::string rational_to_string(const Rational& value) {
    return value.get_str();
}

inline double rational_to_double(const Rational& value) {
    return value.get_d();
}

inline BigInt bigint_pow(const BigInt& base, unsigned long exponent) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

// log10 of a positive big integer, good to ~1e-12 relative error.
inline double bigint_log10(const BigInt& value) {
    if (value <= 0)
        throw std::invalid_argument("log10 of non-positive integer");
    signed long exp2 = 0;
    const double mantissa = mpz_get_d_2exp(&exp2, value.get_mpz_t());
    return (std::log10(mantissa) + static_cast<double>(exp2) * std::log10(2.0));
}

}  // namespace convac

#endif
