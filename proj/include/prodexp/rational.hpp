#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace prodexp {

// Exact rational; every distance, weight and constant is carried in this type.
using Fraction = boost::multiprecision::cpp_rational;

inline Fraction frac(std::int64_t num, std::int64_t den = 1) {
  return Fraction(num) / Fraction(den);
}

// Always renders "p/q", including integers ("1/1") and zero ("0/1").
std::string to_string(const Fraction& value);

// Accepts "p/q" or a bare integer "p".
Fraction parse_fraction(std::string_view text);

Fraction pow(const Fraction& base, unsigned exponent);

}  // namespace prodexp
