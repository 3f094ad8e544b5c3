#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ctxscen {

// Exact rationals, always kept in canonical (lowest terms) form.
using Rational = mpq_class;

/// Parses "n", "n/d" or "-n/d". Throws Error on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// "num/den" in lowest terms; integers still carry "/1".
std::string to_string(const Rational& q);

}  // namespace ctxscen
