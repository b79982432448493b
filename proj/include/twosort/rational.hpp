#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace twosort {

// Exact arbitrary-precision rational. cpp_rational keeps the canonical
// form (gcd 1, positive denominator) after every operation, so comparisons
// are exact by construction.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p/q", an integer, or a finite decimal ("3/4", "-2", "0.25").
Rat parse_rational(const std::string& text);

// Canonical form: "p" or "p/q", never decimal.
std::string rat_str(const Rat& r);

inline bool in_unit(const Rat& r) { return r >= 0 && r <= 1; }

inline Rat clamp_unit(const Rat& r) {
  if (r < 0) return Rat(0);
  if (r > 1) return Rat(1);
  return r;
}

// Cut sum and cut difference on [0,1].
inline Rat cut_sum(const Rat& a, const Rat& b) {
  Rat s = a + b;
  return s > 1 ? Rat(1) : s;
}

inline Rat cut_diff(const Rat& a, const Rat& b) {
  Rat s = a - b;
  return s < 0 ? Rat(0) : s;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace twosort
