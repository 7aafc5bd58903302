#pragma once

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "recurlab/rational.hpp"

namespace recurlab {

/**
 * Closed interval with binary-float endpoints, outward rounded: the lower
 * endpoint is computed rounding down, the upper rounding up, so the exact
 * value of any composed expression is contained in the stored interval.
 * Endpoints convert back to rationals exactly (they are binary rationals).
 */
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 128) : prec_(prec) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDN);  // same precision: exact
    mpfr_set(hi_, o.hi_, MPFR_RNDN);
  }
  Interval(Interval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, 2);
    mpfr_init2(hi_, 2);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  Interval& operator=(Interval o) noexcept {
    std::swap(prec_, o.prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Interval of(const Rat& q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  mpfr_prec_t precision() const { return prec_; }

  /// Natural logarithm; requires a strictly positive interval.
  Interval log() const {
    if (mpfr_sgn(lo_) <= 0) throw DomainError("interval log needs a strictly positive interval");
    Interval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    bool first = true;
    auto consider = [&](const mpfr_t x, const mpfr_t y) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    };
    consider(a.lo_, b.lo_);
    consider(a.lo_, b.hi_);
    consider(a.hi_, b.lo_);
    consider(a.hi_, b.hi_);
    mpfr_clear(t);
    return r;
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0)
      throw DomainError("interval division by an interval containing zero");
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    bool first = true;
    auto consider = [&](const mpfr_t x, const mpfr_t y) {
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    };
    consider(a.lo_, b.lo_);
    consider(a.lo_, b.hi_);
    consider(a.hi_, b.lo_);
    consider(a.hi_, b.hi_);
    mpfr_clear(t);
    return r;
  }

  /// Exact rational value of an endpoint (binary floats are rationals).
  Rat lower() const { return to_rat(lo_); }
  Rat upper() const { return to_rat(hi_); }
  Rat width() const { return upper() - lower(); }

  bool contains(const Rat& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
  }
  bool inside(const Rat& a, const Rat& b) const {
    return mpfr_cmp_q(lo_, a.get_mpq_t()) >= 0 && mpfr_cmp_q(hi_, b.get_mpq_t()) <= 0;
  }
  /// Certified strict order: every point of *this below every point of o.
  bool strictly_below(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }

  std::string str(int digits = 10) const {
    char* s = nullptr;
    // decimal rendering of both endpoints, rounded outward
    mpfr_asprintf(&s, "[%.*RDe, %.*RUe]", digits, lo_, digits, hi_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  static Rat to_rat(const mpfr_t x) {
    if (!mpfr_number_p(x)) throw DomainError("interval endpoint is not finite");
    if (mpfr_zero_p(x)) return Rat(0);
    mpz_class z;
    mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x);
    Rat r(z);
    if (e >= 0)
      mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
      mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return r;
  }

  mpfr_prec_t prec_;
  mpfr_t lo_, hi_;
};

inline constexpr mpfr_prec_t kMaxCertifiedPrecision = 4096;

/// Enclosure of log(a)/log(b) for positive rationals a, b != 1, refined
/// until the interval width is at most tol.
inline Interval log_ratio_enclosure(const Rat& a, const Rat& b, const Rat& tol) {
  if (a <= 0 || b <= 0) throw DomainError("log ratio needs positive inputs");
  if (b == 1) throw DomainError("log ratio denominator log(1) vanishes");
  if (tol <= 0) throw DomainError("tolerance must be positive");
  for (mpfr_prec_t prec = 64; prec <= kMaxCertifiedPrecision; prec *= 2) {
    Interval r = Interval::of(a, prec).log() / Interval::of(b, prec).log();
    if (r.width() <= tol) return r;
  }
  throw ConvergenceError("log ratio enclosure did not reach the requested width");
}

struct PowerCompareReport {
  bool holds = false;  // value < base^exponent, certified
  mpfr_prec_t precision = 0;
  Interval value_log, power_log;
};

/**
 * Certifies value < base^exponent (or its negation) for positive rationals
 * by comparing log(value) with exponent * log(base) in outward-rounded
 * interval arithmetic at escalating precision.  An exact tie never
 * separates and is reported as a convergence error carrying the final
 * enclosures.
 */
inline PowerCompareReport certified_power_compare(const Rat& value, const Rat& base,
                                                  const Rat& exponent) {
  if (value <= 0 || base <= 0) throw DomainError("certified comparison needs positive inputs");
  PowerCompareReport rep;
  for (mpfr_prec_t prec = 64; prec <= kMaxCertifiedPrecision; prec *= 2) {
    rep.value_log = Interval::of(value, prec).log();
    rep.power_log = Interval::of(exponent, prec) * Interval::of(base, prec).log();
    rep.precision = prec;
    if (rep.value_log.strictly_below(rep.power_log)) {
      rep.holds = true;
      return rep;
    }
    if (rep.power_log.strictly_below(rep.value_log)) {
      rep.holds = false;
      return rep;
    }
  }
  throw ConvergenceError("power comparison indeterminate at maximum precision; log(value) in " +
                         rep.value_log.str() + ", exponent*log(base) in " + rep.power_log.str());
}

/// Exact sign of value - base^{p/q} for positive rationals (q > 0): compares
/// value^q with base^p by integer exponentiation.  Returns -1, 0, or 1.
inline int exact_power_compare(const Rat& value, const Rat& base, long p, long q) {
  if (value <= 0 || base <= 0) throw DomainError("exact comparison needs positive inputs");
  if (q <= 0) throw DomainError("exponent denominator must be positive");
  if (p < 0) throw DomainError("exponent must be positive");
  // value^q ? base^p  with value = a/b, base = c/d:  a^q d^p ? c^p b^q
  mpz_class aq, bq, cp, dp;
  mpz_pow_ui(aq.get_mpz_t(), value.get_num().get_mpz_t(), static_cast<unsigned long>(q));
  mpz_pow_ui(bq.get_mpz_t(), value.get_den().get_mpz_t(), static_cast<unsigned long>(q));
  mpz_pow_ui(cp.get_mpz_t(), base.get_num().get_mpz_t(), static_cast<unsigned long>(p));
  mpz_pow_ui(dp.get_mpz_t(), base.get_den().get_mpz_t(), static_cast<unsigned long>(p));
  mpz_class lhs = aq * dp, rhs = cp * bq;
  return mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t());
}

}  // namespace recurlab
