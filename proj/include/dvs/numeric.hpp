#ifndef DVS_NUMERIC_HPP
#define DVS_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace dvs {

// Exact rational scalar used by the oracle/test instantiation.
using Rational = mpq_class;

// Comparison policy for a scalar type. The rational instantiation compares
// exactly; the double instantiation treats values within a small relative
// tolerance as equal so that rounding noise cannot flip control-flow
// decisions (deadline checks, canonical-interval fills, residual tests).
template <class N>
struct arith {
  static constexpr bool exact = true;

  static bool eq(const N& a, const N& b) { return a == b; }
  static bool lt(const N& a, const N& b) { return a < b; }
  static bool le(const N& a, const N& b) { return a <= b; }
  static bool gt(const N& a, const N& b) { return a > b; }
  static bool ge(const N& a, const N& b) { return a >= b; }
  static bool is_zero(const N& a) { return a == 0; }
};

template <>
struct arith<double> {
  static constexpr bool exact = false;
  static constexpr double tolerance = 1e-9;

  static double scale(double a, double b) {
    double m = std::fabs(a) > std::fabs(b) ? std::fabs(a) : std::fabs(b);
    return m > 1.0 ? m : 1.0;
  }
  static bool eq(double a, double b) {
    return std::fabs(a - b) <= tolerance * scale(a, b);
  }
  static bool lt(double a, double b) { return a < b && !eq(a, b); }
  static bool le(double a, double b) { return a <= b || eq(a, b); }
  static bool gt(double a, double b) { return lt(b, a); }
  static bool ge(double a, double b) { return le(b, a); }
  static bool is_zero(double a) { return std::fabs(a) <= tolerance; }
};

template <class N>
double to_double(const N& v) {
  return v.get_d();
}
inline double to_double(double v) { return v; }

template <class N>
N num_from_int(long v) {
  return N(v);
}

// speed^k for integer k >= 0 by repeated squaring; exact for rationals.
template <class N>
N pow_int(N base, unsigned long k) {
  N result = num_from_int<N>(1);
  while (k > 0) {
    if (k & 1UL) result = result * base;
    base = base * base;
    k >>= 1UL;
  }
  return result;
}

// Parses a decimal literal ("0.35", "-2", "1e3") or a fraction ("7/20")
// into an exact rational. Throws std::invalid_argument on malformed input.
Rational rational_from_string(const std::string& text);

// Canonical text form: plain integers render bare ("3"), rationals whose
// denominator is 2^a*5^b render as exact decimals ("0.35"), anything else
// as "p/q". Round-trips through rational_from_string.
std::string rational_to_string(const Rational& v);

// Shortest round-trip decimal form of a double.
std::string double_to_string(double v);

inline Rational rational_from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number literal");
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
      throw std::invalid_argument("malformed fraction literal: " + text);
    if (mpz_sgn(q.get_den().get_mpz_t()) == 0)
      throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'); ++pos) {
    if (text[pos] == '.') {
      if (seen_dot) throw std::invalid_argument("malformed number literal: " + text);
      seen_dot = true;
      continue;
    }
    digits.push_back(text[pos]);
    seen_digit = true;
    if (seen_dot) ++frac_digits;
  }
  long exp10 = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_neg = text[pos] == '-';
      ++pos;
    }
    if (pos == text.size()) throw std::invalid_argument("malformed exponent: " + text);
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw std::invalid_argument("malformed exponent: " + text);
      exp10 = exp10 * 10 + (text[pos] - '0');
      if (exp10 > 100000) throw std::invalid_argument("exponent out of range: " + text);
    }
    if (exp_neg) exp10 = -exp10;
  }
  if (!seen_digit || pos != text.size())
    throw std::invalid_argument("malformed number literal: " + text);

  mpz_class mantissa(digits.empty() ? "0" : digits, 10);
  if (negative) mantissa = -mantissa;
  long net = exp10 - frac_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  Rational q = net >= 0 ? Rational(mantissa * pow10) : Rational(mantissa, pow10);
  q.canonicalize();
  return q;
}

inline std::string rational_to_string(const Rational& v) {
  mpz_class num = v.get_num();
  mpz_class den = v.get_den();
  if (den == 1) return num.get_str();
  // Strip factors of 2 and 5; a pure 2^a*5^b denominator is an exact decimal.
  mpz_class rest = den;
  unsigned long twos = 0, fives = 0;
  while (mpz_even_p(rest.get_mpz_t())) {
    rest /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(rest.get_mpz_t(), 5)) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1 || twos > 64 || fives > 64)
    return num.get_str() + "/" + den.get_str();
  unsigned long places = twos > fives ? twos : fives;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  mpz_class scaled = num * (scale / den);
  bool neg = scaled < 0;
  std::string body = mpz_class(abs(scaled)).get_str();
  if (body.size() <= places) body.insert(0, places - body.size() + 1, '0');
  body.insert(body.size() - places, ".");
  return (neg ? "-" : "") + body;
}

inline std::string double_to_string(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double parsed = std::strtod(buf, nullptr);
  if (parsed == v) {
    // Try shorter forms that still round-trip.
    for (int prec = 1; prec <= 16; ++prec) {
      char shorter[64];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      if (std::strtod(shorter, nullptr) == v) return shorter;
    }
  }
  return buf;
}

template <class N>
N num_from_string(const std::string& text);

template <>
inline Rational num_from_string<Rational>(const std::string& text) {
  return rational_from_string(text);
}

template <>
inline double num_from_string<double>(const std::string& text) {
  try {
    std::size_t used = 0;
    std::size_t slash = text.find('/');
    if (slash != std::string::npos) {
      double num = std::stod(text.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(text);
      std::size_t used2 = 0;
      double den = std::stod(text.substr(slash + 1), &used2);
      if (used2 != text.size() - slash - 1 || den == 0.0)
        throw std::invalid_argument(text);
      return num / den;
    }
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number literal: " + text);
  }
}

template <class N>
std::string num_to_string(const N& v);

template <>
inline std::string num_to_string<Rational>(const Rational& v) {
  return rational_to_string(v);
}

template <>
inline std::string num_to_string<double>(const double& v) {
  return double_to_string(v);
}

}  // namespace dvs

#endif  // DVS_NUMERIC_HPP
