#pragma once

#include <gmpxx.h>

#include <string>

namespace nsbox {

// Exact rational arithmetic for the polytope/LP side of the toolkit.
// GMP supplies the bignum layer; everything built on top lives in this repo.
using Rational = mpq_class;
using BigInt = mpz_class;

/// num/den reduced to canonical form. den must be nonzero.
Rational rat(long num, long den = 1);

/// Exact value of an IEEE double (every finite double is a dyadic rational).
Rational rat_from_double(double value);

/// Accepts "num/den", plain integers, and decimal literals like "0.318".
Rational rat_from_string(const std::string& text);

/// Canonical "num/den" form, e.g. "1/2", "-3/4", "2/1".
std::string rat_to_string(const Rational& q);

double rat_to_double(const Rational& q);

} // namespace nsbox
