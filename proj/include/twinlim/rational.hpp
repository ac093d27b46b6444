#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace twinlim {

using Rational = mpq_class;

/// Parses "p/q", "p" or a finite decimal such as "0.25". Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" for integers.
std::string to_string(const Rational& r);

/// 2^{-k}
Rational pow2_neg(unsigned k);

}  // namespace twinlim
