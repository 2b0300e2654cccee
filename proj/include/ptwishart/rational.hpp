#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptw {

// Exact rational scalar used on the formula side of the library.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational pow_int(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (e < 0) {
    if (base == 0) throw std::domain_error("pow_int: zero to a negative power");
    return Rational(1) / pow_int(base, -e);
  }
  Rational acc(1), b = base;
  unsigned long k = static_cast<unsigned long>(e);
  while (k > 0) {
    if (k & 1u) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Decimal rendering with a fixed number of significant digits, for display
// next to the exact numerator/denominator pair.
inline std::string to_decimal_string(const Rational& r, int sig_digits = 12) {
  std::ostringstream os;
  os.precision(sig_digits);
  os << r.convert_to<boost::multiprecision::cpp_bin_float_50>();
  return os.str();
}

// Accepts "p/q", an integer, or a plain decimal like "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { throw std::invalid_argument("cannot parse rational: '" + s + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    try {
      Integer num(s.substr(0, slash));
      Integer den(s.substr(slash + 1));
      if (den == 0) bad();
      return Rational(num, den);
    } catch (const std::runtime_error&) {
      bad();
    }
  }
  auto dot = s.find('.');
  try {
    if (dot == std::string::npos) return Rational(Integer(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") bad();
    Integer den(1);
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(Integer(digits), den);
  } catch (const std::runtime_error&) {
    bad();
  }
  return Rational(0);  // unreachable
}

}  // namespace ptw
