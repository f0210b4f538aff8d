#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bellfrac {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) {
  return r.convert_to<double>();
}

/// Parses "num/den", plain integers, or decimal strings. Decimals are
/// converted by exact decimal expansion ("0.25" -> 1/4), never through a
/// binary float.
namespace detail {

/// Decimal integer parsing; leading zeros are stripped first so the cpp_int
/// constructor never sees an octal-looking "025".
inline BigInt parse_decimal_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("empty integer");
  for (char c : s)
    if (c < '0' || c > '9') throw std::invalid_argument("non-digit in integer");
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

}  // namespace detail

inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational value: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();

  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    BigInt n, d;
    try {
      n = detail::parse_decimal_integer(text.substr(0, slash));
      d = detail::parse_decimal_integer(text.substr(slash + 1));
    } catch (const std::exception&) {
      fail();
    }
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
  }

  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
    if (body.empty()) fail();
  }

  auto dot = body.find('.');
  std::string digits;
  std::size_t frac_len = 0;
  if (dot == std::string_view::npos) {
    digits = std::string(body);
  } else {
    digits = std::string(body.substr(0, dot)) + std::string(body.substr(dot + 1));
    frac_len = body.size() - dot - 1;
    if (digits.empty()) fail();
  }
  if (digits.empty()) fail();
  BigInt n;
  try {
    n = detail::parse_decimal_integer(digits);
  } catch (const std::exception&) {
    fail();
  }
  BigInt d = 1;
  for (std::size_t i = 0; i < frac_len; ++i) d *= 10;
  Rational r(n, d);
  return negative ? -r : r;
}

inline std::string to_string(const Rational& r) {
  return r.str();
}

}  // namespace bellfrac
