#include "prodexp/rational.hpp"

#include <stdexcept>

namespace prodexp {

using boost::multiprecision::cpp_int;

std::string to_string(const Fraction& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

namespace {

cpp_int parse_int(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer in fraction");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw std::invalid_argument("bad integer: " + std::string(text));
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw std::invalid_argument("bad integer: " + std::string(text));
    }
  }
  return cpp_int(std::string(text));
}

}  // namespace

Fraction parse_fraction(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Fraction(parse_int(text));
  cpp_int num = parse_int(text.substr(0, slash));
  cpp_int den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  return Fraction(num, den);
}

Fraction pow(const Fraction& base, unsigned exponent) {
  Fraction result(1);
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace prodexp
