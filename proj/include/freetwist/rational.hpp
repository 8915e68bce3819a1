#pragma once

// Exact rationals for edge lengths.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>

#include "freetwist/word.hpp"

namespace ft {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(text));
    Integer p(text.substr(0, slash)), q(text.substr(slash + 1));
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(p, q);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ParseError*>(&e)) throw;
    throw ParseError("bad rational '" + text + "'");
  }
}

inline std::string to_string(const Rational& r) {
  auto p = boost::multiprecision::numerator(r), q = boost::multiprecision::denominator(r);
  return q == 1 ? p.str() : p.str() + "/" + q.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Natural log computed from numerator and denominator separately, so huge values stay finite.
inline double log_of(const Rational& r) {
  auto p = boost::multiprecision::numerator(r), q = boost::multiprecision::denominator(r);
  auto lg = [](const Integer& x) {
    std::size_t bits = boost::multiprecision::msb(x);
    if (bits < 900) return std::log(x.convert_to<double>());
    Integer shifted = x >> (bits - 60);
    return std::log(shifted.convert_to<double>()) + static_cast<double>(bits - 60) * std::log(2.0);
  };
  return lg(p) - lg(q);
}

}  // namespace ft
