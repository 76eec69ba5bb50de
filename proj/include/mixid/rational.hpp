#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace mixid {

using Rational = mpq_class;

// Canonical "p/q" with gcd(p, q) = 1 and q > 0. Integers are written "p/1".
std::string to_string(const Rational& q);

// Accepts "p/q", "p", and optional leading sign. Throws InvalidInput.
Rational parse_rational(std::string_view text);

// Exact conversion; every finite double is a dyadic rational.
Rational exact_from_double(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

// p/q in lowest terms.
inline Rational make_rational(long p, long q) {
  Rational r{mpz_class(p), mpz_class(q)};
  r.canonicalize();
  return r;
}

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational abs(const Rational& x) { return ::abs(x); }
  static bool sums_to_one(const Rational& s) { return s == 1; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr double sum_tolerance = 1e-9;
  static double abs(double x) { return std::fabs(x); }
  static bool sums_to_one(double s) { return std::fabs(s - 1.0) <= sum_tolerance; }
};

}  // namespace mixid
