#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace termcut {

// Exact arbitrary-precision rational. All cut values, weights and quality
// ratios flow through this type; nothing is ever rounded.
using Weight = mpq_class;

// Raised on malformed user input (files, CLI parameters, API preconditions).
// The CLI maps it to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// mpq_class does not canonicalize two-argument constructions, and gmpxx
// equality assumes canonical form. Every rational built from a separate
// numerator and denominator must come through here.
inline Weight make_weight(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw input_error("zero denominator");
  Weight w(num, den);
  w.canonicalize();
  return w;
}

namespace detail {
inline bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}
}  // namespace detail

// Parses "p/q", a plain integer, or a decimal string. A decimal with d digits
// after the point parses exactly as numerator/10^d.
inline Weight parse_weight(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  Weight out;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den))
      throw input_error("invalid rational literal: " + text);
    mpz_class d(den);
    if (d == 0) throw input_error("zero denominator: " + text);
    out = Weight(mpz_class(num), d);
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    const std::string ip = dot == 0 ? "0" : s.substr(0, dot);
    const std::string fp = s.substr(dot + 1);
    if (!detail::all_digits(ip) || (!fp.empty() && !detail::all_digits(fp)))
      throw input_error("invalid decimal literal: " + text);
    mpz_class den = 1;
    for (size_t i = 0; i < fp.size(); ++i) den *= 10;
    out = Weight(mpz_class(ip) * den + (fp.empty() ? 0 : mpz_class(fp)), den);
  } else {
    if (!detail::all_digits(s)) throw input_error("invalid number: " + text);
    out = Weight(mpz_class(s));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

// "p/q" when the denominator is not 1, plain "p" otherwise.
inline std::string format_weight(const Weight& w) { return w.get_str(); }

// Smallest integer >= num/den for positive rationals.
inline long ceil_to_long(const Weight& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  if (!c.fits_slong_p()) throw input_error("ceiling does not fit a machine integer");
  return c.get_si();
}

inline double to_double(const Weight& q) { return q.get_d(); }

}  // namespace termcut
