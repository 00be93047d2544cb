#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace fex {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational numbers. boost keeps the invariants we need:
// gcd(|num|, den) == 1, den > 0, zero is 0/1.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const Rational& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

// Parses "p", "-p" or "p/q". Returns nullopt on malformed input or q == 0.
std::optional<Rational> parse_rational(const std::string& s);

inline double to_double(const Rational& r) { return static_cast<double>(r); }

} // namespace fex
