#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace logvertex {

using Rational = mpq_class;

/// Canonical "p/q" text: lowest terms, positive denominator, q printed even when 1.
std::string to_pq_string(const Rational& r);

/// Short form used in expressions: "3", "-1/2".
std::string to_short_string(const Rational& r);

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed text or q == 0.
Rational parse_rational(std::string_view text);

/// Generalized binomial coefficient r(r-1)...(r-k+1)/k!; zero for k < 0.
Rational binom(const Rational& r, int k);

Rational factorial(int n);

inline Rational sign_power(int sign, long exponent) {
    return (sign < 0 && (exponent % 2 != 0)) ? Rational(-1) : Rational(1);
}

}  // namespace logvertex
