#include "lfl3/interval.hpp"

#include <atomic>
#include <cmath>

namespace lfl3 {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::TailAnalysisFailed: return "TailAnalysisFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PreconditionUnverifiable: return "PreconditionUnverifiable";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::NoBoundExtractable: return "NoBoundExtractable";
    case ErrorCode::ConversionSlackTooLarge: return "ConversionSlackTooLarge";
    case ErrorCode::ProfileUnsupported: return "ProfileUnsupported";
    case ErrorCode::DenominatorNonpositive: return "DenominatorNonpositive";
    case ErrorCode::NoConstantUBound: return "NoConstantUBound";
    case ErrorCode::ProviderHypothesisFailed: return "ProviderHypothesisFailed";
    case ErrorCode::NoFeasibleParams: return "NoFeasibleParams";
    case ErrorCode::ScaleExceeded: return "ScaleExceeded";
    case ErrorCode::NonlinearShape: return "NonlinearShape";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace lfl3

namespace lfl3::rigor {

namespace {
std::atomic<int> g_precision{128};
int eff(int prec) { return prec > 0 ? prec : g_precision.load(std::memory_order_relaxed); }
}  // namespace

int precision() { return g_precision.load(std::memory_order_relaxed); }
void set_precision(int bits) {
  if (bits < 24 || bits > 65536) fail(ErrorCode::DomainError, "precision out of range");
  g_precision.store(bits, std::memory_order_relaxed);
}

CertScalar::CertScalar() : CertScalar(0) {}

CertScalar::CertScalar(int prec) {
  mpfr_init2(lo_, eff(prec));
  mpfr_init2(hi_, eff(prec));
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

CertScalar::CertScalar(const CertScalar& o) {
  mpfr_init2(lo_, mpfr_get_prec(o.lo_));
  mpfr_init2(hi_, mpfr_get_prec(o.hi_));
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

CertScalar::CertScalar(CertScalar&& o) noexcept {
  mpfr_init2(lo_, mpfr_get_prec(o.lo_));
  mpfr_init2(hi_, mpfr_get_prec(o.hi_));
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

CertScalar& CertScalar::operator=(const CertScalar& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

CertScalar& CertScalar::operator=(CertScalar&& o) noexcept {
  if (this != &o) {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  return *this;
}

CertScalar::~CertScalar() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

CertScalar CertScalar::exact(long v, int prec) {
  CertScalar r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

CertScalar CertScalar::exact_double(double v, int prec) {
  CertScalar r(prec);
  mpfr_set_d(r.lo_, v, MPFR_RNDD);
  mpfr_set_d(r.hi_, v, MPFR_RNDU);
  return r;
}

CertScalar CertScalar::from_string(const std::string& s, int prec) {
  CertScalar r(prec);
  if (mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD) != 0 &&
      mpfr_nan_p(r.lo_)) fail(ErrorCode::ParseError, "bad numeric literal: " + s);
  if (mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU) != 0 &&
      mpfr_nan_p(r.hi_)) fail(ErrorCode::ParseError, "bad numeric literal: " + s);
  if (mpfr_nan_p(r.lo_) || mpfr_nan_p(r.hi_))
    fail(ErrorCode::ParseError, "bad numeric literal: " + s);
  return r;
}

CertScalar CertScalar::from_endpoints_exact(long lo, long hi, int prec) {
  CertScalar r(prec);
  mpfr_set_si(r.lo_, lo, MPFR_RNDD);
  mpfr_set_si(r.hi_, hi, MPFR_RNDU);
  return r;
}

CertScalar CertScalar::pi(int prec) {
  CertScalar r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

CertScalar CertScalar::pos_inf(int prec) {
  CertScalar r(prec);
  mpfr_set_inf(r.lo_, 1);
  mpfr_set_inf(r.hi_, 1);
  return r;
}

CertScalar CertScalar::hull(const CertScalar& a, const CertScalar& b) {
  CertScalar r(std::max(a.prec(), b.prec()));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

std::string CertScalar::str(int digits) const {
  auto one = [&](mpfr_srcptr x, mpfr_rnd_t rnd) {
    char* s = nullptr;
    mpfr_exp_t e;
    s = mpfr_get_str(nullptr, &e, 10, digits, x, rnd);
    std::string body(s);
    mpfr_free_str(s);
    std::string sign;
    if (!body.empty() && body[0] == '-') { sign = "-"; body = body.substr(1); }
    if (body.find_first_not_of('0') == std::string::npos) return std::string("0");
    return sign + "0." + body + "e" + std::to_string((long)e);
  };
  if (mpfr_inf_p(hi_) || mpfr_inf_p(lo_)) {
    return std::string("[") + (mpfr_inf_p(lo_) ? "-inf" : one(lo_, MPFR_RNDD)) + ", " +
           (mpfr_inf_p(hi_) ? "inf" : one(hi_, MPFR_RNDU)) + "]";
  }
  return "[" + one(lo_, MPFR_RNDD) + ", " + one(hi_, MPFR_RNDU) + "]";
}

bool CertScalar::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}
bool CertScalar::is_positive() const { return mpfr_sgn(lo_) > 0; }
bool CertScalar::is_nonnegative() const { return mpfr_sgn(lo_) >= 0; }
bool CertScalar::is_negative() const { return mpfr_sgn(hi_) < 0; }
bool CertScalar::certainly_lt(const CertScalar& o) const {
  return mpfr_cmp(hi_, o.lo_) < 0;
}
bool CertScalar::certainly_le(const CertScalar& o) const {
  return mpfr_cmp(hi_, o.lo_) <= 0;
}
bool CertScalar::contains(const CertScalar& o) const {
  return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
}

double CertScalar::width_rel() const {
  double lo = lo_d(), hi = hi_d();
  double m = std::max(std::fabs(lo), std::fabs(hi));
  if (m == 0) return 0;
  return (hi - lo) / m;
}

void CertScalar::set_endpoints(mpfr_srcptr lo, mpfr_srcptr hi) {
  mpfr_set(lo_, lo, MPFR_RNDD);
  mpfr_set(hi_, hi, MPFR_RNDU);
}

namespace {
int pmax(const CertScalar& a, const CertScalar& b) {
  return std::max(a.prec(), b.prec());
}
}  // namespace

CertScalar operator+(const CertScalar& a, const CertScalar& b) {
  CertScalar r(pmax(a, b));
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_add(lo, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(hi, a.hi_, b.hi_, MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar operator-(const CertScalar& a, const CertScalar& b) {
  CertScalar r(pmax(a, b));
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_sub(lo, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(hi, a.hi_, b.lo_, MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar operator-(const CertScalar& a) {
  CertScalar r(a.prec());
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_neg(lo, a.hi_, MPFR_RNDD);
  mpfr_neg(hi, a.lo_, MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar operator*(const CertScalar& a, const CertScalar& b) {
  const int p = pmax(a, b);
  mpfr_t c[4], lo, hi;
  for (auto& x : c) mpfr_init2(x, p);
  mpfr_init2(lo, p);
  mpfr_init2(hi, p);
  // lower endpoint: min of products rounded down
  mpfr_mul(c[0], a.lo_raw(), b.lo_raw(), MPFR_RNDD);
  mpfr_mul(c[1], a.lo_raw(), b.hi_raw(), MPFR_RNDD);
  mpfr_mul(c[2], a.hi_raw(), b.lo_raw(), MPFR_RNDD);
  mpfr_mul(c[3], a.hi_raw(), b.hi_raw(), MPFR_RNDD);
  mpfr_set(lo, c[0], MPFR_RNDD);
  for (int i = 1; i < 4; ++i) mpfr_min(lo, lo, c[i], MPFR_RNDD);
  mpfr_mul(c[0], a.lo_raw(), b.lo_raw(), MPFR_RNDU);
  mpfr_mul(c[1], a.lo_raw(), b.hi_raw(), MPFR_RNDU);
  mpfr_mul(c[2], a.hi_raw(), b.lo_raw(), MPFR_RNDU);
  mpfr_mul(c[3], a.hi_raw(), b.hi_raw(), MPFR_RNDU);
  mpfr_set(hi, c[0], MPFR_RNDU);
  for (int i = 1; i < 4; ++i) mpfr_max(hi, hi, c[i], MPFR_RNDU);
  // 0 * inf produces NaN; our intervals never pair an infinite endpoint with
  // a zero crossing where that matters, but guard anyway.
  if (mpfr_nan_p(lo) || mpfr_nan_p(hi))
    fail(ErrorCode::DomainViolation, "0*inf in interval multiply");
  CertScalar r(p);
  r.set_endpoints(lo, hi);
  for (auto& x : c) mpfr_clear(x);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar operator/(const CertScalar& a, const CertScalar& b) {
  if (b.contains_zero())
    fail(ErrorCode::DomainViolation, "division by interval containing 0");
  const int p = pmax(a, b);
  mpfr_t c[4], lo, hi;
  for (auto& x : c) mpfr_init2(x, p);
  mpfr_init2(lo, p);
  mpfr_init2(hi, p);
  mpfr_div(c[0], a.lo_raw(), b.lo_raw(), MPFR_RNDD);
  mpfr_div(c[1], a.lo_raw(), b.hi_raw(), MPFR_RNDD);
  mpfr_div(c[2], a.hi_raw(), b.lo_raw(), MPFR_RNDD);
  mpfr_div(c[3], a.hi_raw(), b.hi_raw(), MPFR_RNDD);
  mpfr_set(lo, c[0], MPFR_RNDD);
  for (int i = 1; i < 4; ++i) mpfr_min(lo, lo, c[i], MPFR_RNDD);
  mpfr_div(c[0], a.lo_raw(), b.lo_raw(), MPFR_RNDU);
  mpfr_div(c[1], a.lo_raw(), b.hi_raw(), MPFR_RNDU);
  mpfr_div(c[2], a.hi_raw(), b.lo_raw(), MPFR_RNDU);
  mpfr_div(c[3], a.hi_raw(), b.hi_raw(), MPFR_RNDU);
  mpfr_set(hi, c[0], MPFR_RNDU);
  for (int i = 1; i < 4; ++i) mpfr_max(hi, hi, c[i], MPFR_RNDU);
  CertScalar r(p);
  r.set_endpoints(lo, hi);
  for (auto& x : c) mpfr_clear(x);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar sqrt(const CertScalar& a) {
  if (!a.is_nonnegative())
    fail(ErrorCode::DomainViolation, "sqrt of interval with negative part");
  CertScalar r(a.prec());
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_sqrt(lo, a.lo_raw(), MPFR_RNDD);
  mpfr_sqrt(hi, a.hi_raw(), MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar log(const CertScalar& a) {
  if (!a.is_positive())
    fail(ErrorCode::DomainViolation, "log of interval with non-positive part");
  CertScalar r(a.prec());
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_log(lo, a.lo_raw(), MPFR_RNDD);
  mpfr_log(hi, a.hi_raw(), MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar exp(const CertScalar& a) {
  CertScalar r(a.prec());
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_exp(lo, a.lo_raw(), MPFR_RNDD);
  mpfr_exp(hi, a.hi_raw(), MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar abs(const CertScalar& a) {
  if (a.is_nonnegative()) return a;
  if (a.is_negative()) return -a;
  CertScalar na = -a;
  CertScalar r = max(a, na);
  mpfr_t z;
  mpfr_init2(z, r.prec());
  mpfr_set_zero(z, 1);
  r.set_endpoints(z, r.hi_raw());
  mpfr_clear(z);
  return r;
}

CertScalar floor_points(const CertScalar& a) {
  CertScalar r(a.prec());
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_floor(lo, a.lo_raw());
  mpfr_floor(hi, a.hi_raw());
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar max(const CertScalar& a, const CertScalar& b) {
  CertScalar r(pmax(a, b));
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_max(lo, a.lo_raw(), b.lo_raw(), MPFR_RNDD);
  mpfr_max(hi, a.hi_raw(), b.hi_raw(), MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar min(const CertScalar& a, const CertScalar& b) {
  CertScalar r(pmax(a, b));
  mpfr_t lo, hi;
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_min(lo, a.lo_raw(), b.lo_raw(), MPFR_RNDD);
  mpfr_min(hi, a.hi_raw(), b.hi_raw(), MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar pow_long(const CertScalar& a, long e) {
  if (e == 0) return CertScalar::exact(1, a.prec());
  if (e < 0) return CertScalar::exact(1, a.prec()) / pow_long(a, -e);
  // even powers of sign-mixed intervals need the hull through zero
  if (e % 2 == 0 && a.contains_zero()) {
    CertScalar m = max(abs(a), CertScalar::exact(0, a.prec()));
    CertScalar r(a.prec());
    mpfr_t lo, hi;
    mpfr_init2(lo, r.prec());
    mpfr_init2(hi, r.prec());
    mpfr_set_zero(lo, 1);
    mpfr_pow_si(hi, m.hi_raw(), e, MPFR_RNDU);
    r.set_endpoints(lo, hi);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return r;
  }
  CertScalar r(a.prec());
  mpfr_t c0, c1, lo, hi;
  mpfr_init2(c0, r.prec());
  mpfr_init2(c1, r.prec());
  mpfr_init2(lo, r.prec());
  mpfr_init2(hi, r.prec());
  mpfr_pow_si(c0, a.lo_raw(), e, MPFR_RNDD);
  mpfr_pow_si(c1, a.hi_raw(), e, MPFR_RNDD);
  mpfr_min(lo, c0, c1, MPFR_RNDD);
  mpfr_pow_si(c0, a.lo_raw(), e, MPFR_RNDU);
  mpfr_pow_si(c1, a.hi_raw(), e, MPFR_RNDU);
  mpfr_max(hi, c0, c1, MPFR_RNDU);
  r.set_endpoints(lo, hi);
  mpfr_clear(c0);
  mpfr_clear(c1);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar pow_rat(const CertScalar& a, long num, long den) {
  if (den <= 0) fail(ErrorCode::DomainViolation, "pow with non-positive denominator");
  if (den == 1) return pow_long(a, num);
  if (!a.is_nonnegative())
    fail(ErrorCode::DomainViolation, "fractional power of negative interval");
  if (den == 2) return sqrt(pow_long(a, num));
  if (a.contains_zero()) {
    if (num <= 0) fail(ErrorCode::DomainViolation, "x^(neg/den) with x possibly 0");
    // [0, hi]^(num/den) = [0, hi^(num/den)]
    CertScalar up = exp(log(max(a, CertScalar::from_string("1e-300", a.prec()))) *
                        (CertScalar::exact(num, a.prec()) / CertScalar::exact(den, a.prec())));
    mpfr_t z;
    mpfr_init2(z, up.prec());
    mpfr_set_zero(z, 1);
    mpfr_t h;
    mpfr_init2(h, up.prec());
    mpfr_set(h, up.hi_raw(), MPFR_RNDU);
    up.set_endpoints(z, h);
    mpfr_clear(z);
    mpfr_clear(h);
    return up;
  }
  return exp(log(a) * (CertScalar::exact(num, a.prec()) / CertScalar::exact(den, a.prec())));
}

}  // namespace lfl3::rigor
