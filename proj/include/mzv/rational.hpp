#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mzv {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << r;  // canonical "p" or "p/q", q > 0
  return os.str();
}

inline Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

inline Rational factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

}  // namespace mzv
