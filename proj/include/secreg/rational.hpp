#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace secreg {

// Exact rational scalar used for all inequality coefficients, Farkas
// multipliers, and FME combination weights. Probabilities and evaluated
// entropies stay in double; see JointPmf.
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input.
inline Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(boost::multiprecision::cpp_int(text));
    boost::multiprecision::cpp_int num(text.substr(0, slash));
    boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + text);
  }
}

inline std::string rational_to_string(const Rat& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace secreg
