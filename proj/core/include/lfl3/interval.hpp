#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>

#include "lfl3/errors.hpp"

namespace lfl3::rigor {

// Working precision in bits for newly constructed intervals. Set once at
// startup (before worker threads spawn); values carry their own precision
// afterwards, so mixed-precision evaluation (e.g. the 512-bit reference
// oracle) stays safe.
int precision();
void set_precision(int bits);

// Closed interval [lo, hi] with outward rounding: every operation rounds the
// lower endpoint down and the upper endpoint up, so the exact mathematical
// result of combining any contained points is contained in the result.
class CertScalar {
 public:
  CertScalar();
  explicit CertScalar(int prec);
  CertScalar(const CertScalar& o);
  CertScalar(CertScalar&& o) noexcept;
  CertScalar& operator=(const CertScalar& o);
  CertScalar& operator=(CertScalar&& o) noexcept;
  ~CertScalar();

  static CertScalar exact(long v, int prec = 0);
  static CertScalar exact_double(double v, int prec = 0);
  // Decimal string, outward-rounded to the working precision.
  static CertScalar from_string(const std::string& s, int prec = 0);
  static CertScalar from_endpoints_exact(long lo, long hi, int prec = 0);
  static CertScalar pi(int prec = 0);
  static CertScalar pos_inf(int prec = 0);
  static CertScalar hull(const CertScalar& a, const CertScalar& b);

  int prec() const { return mpfr_get_prec(lo_); }

  double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  std::string str(int digits = 20) const;

  bool lo_is_inf() const { return mpfr_inf_p(lo_) != 0; }
  bool hi_is_inf() const { return mpfr_inf_p(hi_) != 0; }
  bool is_finite() const { return !lo_is_inf() && !hi_is_inf(); }
  bool contains_zero() const;
  bool is_positive() const;      // lo > 0
  bool is_nonnegative() const;   // lo >= 0
  bool is_negative() const;      // hi < 0
  bool certainly_lt(const CertScalar& o) const;   // hi < o.lo
  bool certainly_le(const CertScalar& o) const;   // hi <= o.lo
  bool certainly_gt(const CertScalar& o) const { return o.certainly_lt(*this); }
  bool certainly_ge(const CertScalar& o) const { return o.certainly_le(*this); }
  bool contains(const CertScalar& o) const;       // o subseteq this
  double width_rel() const;

  // Raw endpoint access for the few routines that need it.
  mpfr_srcptr lo_raw() const { return lo_; }
  mpfr_srcptr hi_raw() const { return hi_; }
  void set_endpoints(mpfr_srcptr lo, mpfr_srcptr hi);

  friend CertScalar operator+(const CertScalar& a, const CertScalar& b);
  friend CertScalar operator-(const CertScalar& a, const CertScalar& b);
  friend CertScalar operator*(const CertScalar& a, const CertScalar& b);
  friend CertScalar operator/(const CertScalar& a, const CertScalar& b);
  friend CertScalar operator-(const CertScalar& a);

 private:
  mpfr_t lo_, hi_;
};

CertScalar sqrt(const CertScalar& a);
CertScalar log(const CertScalar& a);
CertScalar exp(const CertScalar& a);
CertScalar abs(const CertScalar& a);
CertScalar floor_points(const CertScalar& a);  // [floor(lo), floor(hi)]
CertScalar max(const CertScalar& a, const CertScalar& b);
CertScalar min(const CertScalar& a, const CertScalar& b);
CertScalar pow_long(const CertScalar& a, long e);
// x^(num/den), den > 0; requires x > 0 unless the exponent is integral.
CertScalar pow_rat(const CertScalar& a, long num, long den);

}  // namespace lfl3::rigor
