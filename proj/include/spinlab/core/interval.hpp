#pragma once

// Outward-rounded interval arithmetic on MPFR endpoints. Every operation
// rounds the lower endpoint toward -inf and the upper toward +inf, so the
// exact real result is always enclosed.

#include <spinlab/core/rational.hpp>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace spinlab {

class Interval {
 public:
  static constexpr mpfr_prec_t default_precision = 128;

  explicit Interval(mpfr_prec_t prec = default_precision) {
    init(prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  Interval(const Rational& q, mpfr_prec_t prec) {
    init(prec);
    mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
  }

  /// Encloses num/den for big integers without forming the reduced fraction.
  Interval(const BigInt& num, const BigInt& den, mpfr_prec_t prec) {
    if (den == 0) throw std::domain_error("interval from zero denominator");
    init(prec);
    BigInt sn = den < 0 ? BigInt(-num) : num;
    BigInt sd = den < 0 ? BigInt(-den) : den;
    mpfr_t n, d;
    mpfr_inits2(prec + 16, n, d, static_cast<mpfr_ptr>(nullptr));
    // With sd > 0 the quotient is increasing in n; it is decreasing in d
    // when n >= 0 and increasing when n < 0.
    const bool nonneg = sn >= 0;
    mpfr_set_z(n, sn.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(d, sd.get_mpz_t(), nonneg ? MPFR_RNDU : MPFR_RNDD);
    mpfr_div(lo_, n, d, MPFR_RNDD);
    mpfr_set_z(n, sn.get_mpz_t(), MPFR_RNDU);
    mpfr_set_z(d, sd.get_mpz_t(), nonneg ? MPFR_RNDD : MPFR_RNDU);
    mpfr_div(hi_, n, d, MPFR_RNDU);
    mpfr_clears(n, d, static_cast<mpfr_ptr>(nullptr));
  }

  static Interval pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  Interval(const Interval& other) {
    init(other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  Interval(Interval&& other) noexcept {
    init(other.precision());
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }
  Interval& operator=(Interval other) noexcept {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    return *this;
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }

  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  bool certainly_nonnegative() const { return mpfr_sgn(lo_) >= 0; }
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

  bool contains(const Rational& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
  }

  double lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double midpoint_double() const { return 0.5 * (lower_double() + upper_double()); }

  /// (hi - lo) / min(|lo|, |hi|); infinite when the interval touches zero.
  double relative_width() const {
    mpfr_t w, m;
    mpfr_inits2(precision(), w, m, static_cast<mpfr_ptr>(nullptr));
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    if (mpfr_sgn(lo_) > 0) {
      mpfr_set(m, lo_, MPFR_RNDD);
    } else if (mpfr_sgn(hi_) < 0) {
      mpfr_neg(m, hi_, MPFR_RNDD);
    } else {
      mpfr_clears(w, m, static_cast<mpfr_ptr>(nullptr));
      return mpfr_cmp(lo_, hi_) == 0 ? 0.0 : HUGE_VAL;
    }
    mpfr_div(w, w, m, MPFR_RNDU);
    double out = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clears(w, m, static_cast<mpfr_ptr>(nullptr));
    return out;
  }

  /// Midpoint with `digits` significant digits (presentation only).
  std::string midpoint_string(int digits = 20) const {
    mpfr_t m;
    mpfr_init2(m, precision() + 2);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    std::string s = format(m, digits, MPFR_RNDN);
    mpfr_clear(m);
    return s;
  }

  std::string to_string(int digits = 20) const {
    return "[" + format(lo_, digits, MPFR_RNDD) + ", " + format(hi_, digits, MPFR_RNDU) + "]";
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  friend Interval operator-(const Interval& a) {
    Interval r(a.precision());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_t t;
    mpfr_init2(t, r.precision());
    mpfr_srcptr as[2] = {a.lo_, a.hi_};
    mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, -1);
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
      }
    }
    mpfr_clear(t);
    return r;
  }

  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw std::domain_error("interval division by an interval containing zero");
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_t t;
    mpfr_init2(t, r.precision());
    mpfr_srcptr as[2] = {a.lo_, a.hi_};
    mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, -1);
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_div(t, x, y, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(t, x, y, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
      }
    }
    mpfr_clear(t);
    return r;
  }

  Interval& operator+=(const Interval& b) { return *this = *this + b; }
  Interval& operator-=(const Interval& b) { return *this = *this - b; }
  Interval& operator*=(const Interval& b) { return *this = *this * b; }

  /// Requires a nonnegative enclosure (a lower endpoint below zero is an error).
  Interval sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw std::domain_error("interval sqrt of a possibly negative value");
    Interval r(precision());
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  /// Integer power; defined for strictly positive enclosures when exp < 0.
  Interval pow(long exp) const {
    if (exp < 0) {
      Interval one(Rational(1), precision());
      return one / pow(-exp);
    }
    Interval base = *this;
    if (exp % 2 == 0 && mpfr_sgn(lo_) < 0) base = abs();
    Interval result(Rational(1), precision());
    while (exp > 0) {
      if (exp & 1) result = result * base;
      exp >>= 1;
      if (exp > 0) base = base * base;
    }
    return result;
  }

  Interval abs() const {
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    Interval r(precision());
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
    return r;
  }

 private:
  void init(mpfr_prec_t prec) {
    prec = std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN);
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
  }

  static std::string format(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
    char* buf = nullptr;
    const char* fmt = rnd == MPFR_RNDD ? "%.*RDg" : rnd == MPFR_RNDU ? "%.*RUg" : "%.*RNg";
    mpfr_asprintf(&buf, fmt, digits, x);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace spinlab
