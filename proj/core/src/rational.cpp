#include "petro/rational.hpp"

#include <cctype>

namespace petro {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt pow10(std::size_t k) {
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= 10;
  return r;
}

// cpp_int's string constructor reads a leading 0 as an octal prefix; digit
// strings here are always decimal.
BigInt decimal_digits_to_int(std::string_view digits) {
  std::size_t i = 0;
  while (i + 1 < digits.size() && digits[i] == '0') ++i;
  return BigInt{std::string(digits.substr(i))};
}

}  // namespace

std::optional<Rational> try_parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;

  auto make = [&](Rational q) -> std::optional<Rational> {
    return negative ? -q : q;
  };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt d = decimal_digits_to_int(den);
    if (d == 0) return std::nullopt;
    return make(Rational(decimal_digits_to_int(num), d));
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ipart = s.substr(0, dot);
    std::string_view fpart = s.substr(dot + 1);
    if (!all_digits(ipart) || !all_digits(fpart)) return std::nullopt;
    BigInt scaled = decimal_digits_to_int(std::string(ipart) + std::string(fpart));
    return make(Rational(scaled, pow10(fpart.size())));
  }
  if (!all_digits(s)) return std::nullopt;
  return make(Rational(decimal_digits_to_int(s)));
}

Rational parse_rational(std::string_view text) {
  auto q = try_parse_rational(text);
  if (!q) {
    throw RationalParseError("not a rational literal: '" + std::string(text) + "'");
  }
  return *q;
}

std::string to_ratio_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::optional<std::string> to_decimal_string(const Rational& q) {
  BigInt num = numerator(q);
  BigInt den = denominator(q);
  bool negative = num < 0;
  if (negative) num = -num;

  std::size_t twos = 0, fives = 0;
  BigInt d = den;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::nullopt;

  std::size_t k = std::max(twos, fives);
  for (std::size_t i = twos; i < k; ++i) num *= 2;
  for (std::size_t i = fives; i < k; ++i) num *= 5;

  std::string digits = num.str();
  std::string out;
  if (k == 0) {
    out = digits;
  } else {
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
  }
  if (negative && out != "0") out.insert(0, 1, '-');
  return out;
}

std::string to_display_string(const Rational& q) {
  if (auto dec = to_decimal_string(q)) return *dec;
  return to_ratio_string(q);
}

}  // namespace petro
