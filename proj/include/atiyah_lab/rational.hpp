#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace alab {

// mpq_class keeps values canonical (positive denominator, reduced, 0 == 0/1)
// as long as every value is built through parse_rational or arithmetic.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws SyntaxError on malformed text and
/// InputError on a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

}  // namespace alab
