#pragma once

#include <gmpxx.h>

#include <string>

namespace gromov {

// Exact rational scalar. All distances, Gromov products and LP data use this
// type; there is no floating-point path anywhere in the library.
using Rat = mpq_class;
using Int = mpz_class;

// Builds a canonical rational from numerator/denominator.
Rat make_rat(long num, long den = 1);

// Parses "7", "-3/2" or a decimal literal like "0.25" (= 1/4) exactly.
// Throws NumberFormatError on anything else.
Rat parse_rat(const std::string& text);

// Renders as "p" or "p/q" with q > 0.
std::string rat_to_string(const Rat& value);

}  // namespace gromov
