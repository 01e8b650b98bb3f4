#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace petro {

// All quantities in the library are exact rationals. Decimal input such as
// "73.95" is read as 7395/100; nothing is ever rounded.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct RationalParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts integers ("42", "-7"), decimals ("73.95", "-0.05") and ratios
// ("3/2", "-7395/100").
Rational parse_rational(std::string_view text);
std::optional<Rational> try_parse_rational(std::string_view text);

// "p/q" in lowest terms, or just "p" for integers.
std::string to_ratio_string(const Rational& q);

// Finite decimal expansion ("73.95", "-0.05", "12"), available exactly when
// the reduced denominator is of the form 2^a * 5^b.
std::optional<std::string> to_decimal_string(const Rational& q);

// Decimal when one exists, ratio otherwise.
std::string to_display_string(const Rational& q);

}  // namespace petro
