#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace phorslab {

// Exact rational numbers. Always canonical (gmp keeps fractions reduced).
using Rat = mpq_class;

// Accepts "3", "3/4", "0.125". Throws std::invalid_argument otherwise.
Rat parse_rat(std::string_view text);

// "n" when the denominator is 1, "n/d" otherwise.
std::string to_string(const Rat& q);

Rat make_rat(long num, long den = 1);

long double to_long_double(const Rat& q);

// Exact conversion of a finite long double (binary fractions are exact).
Rat from_long_double(long double x);

// Largest k/2^bits <= q, resp. smallest k/2^bits >= q.
Rat round_down_dyadic(const Rat& q, unsigned bits);
Rat round_up_dyadic(const Rat& q, unsigned bits);

// Continued-fraction convergents of x, stopping at the first one within tol
// or once the denominator exceeds max_den.
Rat rationalize(long double x, long double tol, std::uint64_t max_den);

}  // namespace phorslab
