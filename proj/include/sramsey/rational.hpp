#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "structure.hpp"

namespace sramsey {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class RationalFormatError : public Error {
public:
  explicit RationalFormatError(const std::string& what) : Error(what) {}
};

namespace detail {

inline BigInt parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw RationalFormatError("malformed rational '" + std::string(whole) + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw RationalFormatError("malformed rational '" + std::string(whole) + "' (expected p or p/q with integers)");
    v = v * 10 + (s[i] - '0');
  }
  return negative ? BigInt(-v) : v;
}

}  // namespace detail

/// Parses "p" or "p/q". Decimal points and exponents are rejected.
inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(s, s));
  BigInt p = detail::parse_integer(s.substr(0, slash), s);
  auto qs = s.substr(slash + 1);
  if (!qs.empty() && (qs[0] == '-' || qs[0] == '+'))
    throw RationalFormatError("malformed rational '" + std::string(s) + "' (sign belongs on the numerator)");
  BigInt q = detail::parse_integer(qs, s);
  if (q == 0) throw RationalFormatError("zero denominator in '" + std::string(s) + "'");
  return Rational(p, q);
}

/// Always "p/q" in lowest terms, q > 0.
inline std::string format_rational(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

}  // namespace sramsey
