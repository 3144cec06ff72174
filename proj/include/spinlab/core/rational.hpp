#pragma once

// Exact rational scalars (GMP) and the handful of integer helpers the
// combinatorial code needs.

#include <gmpxx.h>
#include <mpfr.h>

#include <cctype>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spinlab {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p", or "-p/q". Whitespace around the value is ignored.
inline Rational parse_rational(std::string_view text) {
  std::size_t first = 0;
  std::size_t last = text.size();
  while (first < last && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(text[last - 1]))) --last;
  std::string s(text.substr(first, last - first));
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.front() == '+') s.erase(0, 1);
  std::size_t slash = s.find('/');
  auto digits_ok = [](std::string_view part, bool allow_sign) {
    if (allow_sign && !part.empty() && part.front() == '-') part.remove_prefix(1);
    if (part.empty()) return false;
    for (char c : part)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits_ok(s, true)) throw std::invalid_argument("malformed rational '" + s + "'");
  } else if (!digits_ok(std::string_view(s).substr(0, slash), true) ||
             !digits_ok(std::string_view(s).substr(slash + 1), false)) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
  Rational q;
  q.set_str(s, 10);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

/// Canonical "p/q" form; integers print without a denominator.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Round-to-nearest decimal rendering with `digits` significant digits.
/// Presentation only: never feed this back into a computation.
inline std::string to_decimal(const Rational& q, int digits = 20) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, x);
  std::string out(buf);
  mpfr_free_str(buf);
  mpfr_clear(x);
  return out;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// n!! with the conventions (-1)!! = 0!! = 1.
inline BigInt double_factorial(long n) {
  if (n <= 0) return 1;
  BigInt r;
  mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

/// base^exp for any integer exponent; throws on 0^negative.
inline Rational pow(const Rational& base, long exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return pow(Rational(1) / base, -exp);
  }
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exp));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exp));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// True iff q >= 0 is the square of a rational; writes the root when asked.
inline bool is_rational_square(const Rational& q, Rational* root = nullptr) {
  if (q < 0) return false;
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0)
    return false;
  if (root != nullptr) {
    BigInt n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    *root = Rational(n, d);
    root->canonicalize();
  }
  return true;
}

/// Least common multiple of the denominators.
inline BigInt common_denominator(std::span<const Rational> values) {
  BigInt l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

}  // namespace spinlab
