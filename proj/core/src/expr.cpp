#include "lfl3/expr.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace lfl3::rigor {

Rat::Rat(long n, long d) {
  if (d == 0) fail(ErrorCode::DomainViolation, "rational with zero denominator");
  if (d < 0) { n = -n; d = -d; }
  long g = std::gcd(std::abs(n), d);
  if (g > 1) { n /= g; d /= g; }
  num = n;
  den = d;
}
Rat Rat::operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }
Rat Rat::operator-(const Rat& o) const { return Rat(num * o.den - o.num * den, den * o.den); }
Rat Rat::operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }
bool Rat::operator<(const Rat& o) const { return num * o.den < o.num * den; }
CertScalar Rat::to_interval(int prec) const {
  return CertScalar::exact(num, prec) / CertScalar::exact(den, prec);
}

ExprPtr constant(CertScalar v) { return std::make_shared<Expr>(std::move(v)); }
ExprPtr constant(long v) { return std::make_shared<Expr>(CertScalar::exact(v)); }
ExprPtr constant_str(const std::string& s) { return std::make_shared<Expr>(CertScalar::from_string(s)); }
ExprPtr symbol(const std::string& name) { return std::make_shared<Expr>(name); }

namespace {
ExprPtr node(NodeKind k, std::vector<ExprPtr> kids) {
  return std::make_shared<Expr>(k, std::move(kids));
}
}  // namespace

ExprPtr add(ExprPtr a, ExprPtr b) { return node(NodeKind::Add, {std::move(a), std::move(b)}); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return node(NodeKind::Sub, {std::move(a), std::move(b)}); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return node(NodeKind::Mul, {std::move(a), std::move(b)}); }
ExprPtr div(ExprPtr a, ExprPtr b) { return node(NodeKind::Div, {std::move(a), std::move(b)}); }
ExprPtr sqrt(ExprPtr a) { return node(NodeKind::Sqrt, {std::move(a)}); }
ExprPtr log(ExprPtr a) { return node(NodeKind::Log, {std::move(a)}); }
ExprPtr exp(ExprPtr a) { return node(NodeKind::Exp, {std::move(a)}); }
ExprPtr floor(ExprPtr a) { return node(NodeKind::Floor, {std::move(a)}); }
ExprPtr max(ExprPtr a, ExprPtr b) { return node(NodeKind::Max, {std::move(a), std::move(b)}); }
ExprPtr min(ExprPtr a, ExprPtr b) { return node(NodeKind::Min, {std::move(a), std::move(b)}); }
ExprPtr pow(ExprPtr a, Rat e) { return std::make_shared<Expr>(std::move(a), e); }

bool contains_symbol(const ExprPtr& e, const std::string& sym) {
  if (e->kind() == NodeKind::Symbol) return e->symbol() == sym;
  for (const auto& k : e->kids())
    if (contains_symbol(k, sym)) return true;
  return false;
}

void collect_symbols(const ExprPtr& e, std::vector<std::string>& out) {
  if (e->kind() == NodeKind::Symbol) {
    if (std::find(out.begin(), out.end(), e->symbol()) == out.end()) out.push_back(e->symbol());
  }
  for (const auto& k : e->kids()) collect_symbols(k, out);
}

ExprPtr substitute(const ExprPtr& e, const std::string& sym, const ExprPtr& repl) {
  switch (e->kind()) {
    case NodeKind::Const: return e;
    case NodeKind::Symbol: return e->symbol() == sym ? repl : e;
    case NodeKind::Pow: return pow(substitute(e->kids()[0], sym, repl), e->exponent());
    default: {
      std::vector<ExprPtr> kids;
      kids.reserve(e->kids().size());
      for (const auto& k : e->kids()) kids.push_back(substitute(k, sym, repl));
      return node(e->kind(), std::move(kids));
    }
  }
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case NodeKind::Const: {
      return mpfr_cmp(a->value().lo_raw(), b->value().lo_raw()) == 0 &&
             mpfr_cmp(a->value().hi_raw(), b->value().hi_raw()) == 0;
    }
    case NodeKind::Symbol: return a->symbol() == b->symbol();
    case NodeKind::Pow:
      if (!(a->exponent() == b->exponent())) return false;
      break;
    default: break;
  }
  if (a->kids().size() != b->kids().size()) return false;
  for (size_t i = 0; i < a->kids().size(); ++i)
    if (!structurally_equal(a->kids()[i], b->kids()[i])) return false;
  return true;
}

// ------------------------------------------------------------------ eval

namespace {

CertScalar eval_rec(const Expr* e, const Point& point, int prec,
                    std::unordered_map<const Expr*, CertScalar>& memo) {
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  CertScalar r;
  switch (e->kind()) {
    case NodeKind::Const: r = e->value(); break;
    case NodeKind::Symbol: {
      auto p = point.find(e->symbol());
      if (p == point.end()) fail(ErrorCode::UndeclaredSymbol, e->symbol());
      r = p->second;
      break;
    }
    case NodeKind::Add:
      r = eval_rec(e->kids()[0].get(), point, prec, memo) + eval_rec(e->kids()[1].get(), point, prec, memo);
      break;
    case NodeKind::Sub:
      r = eval_rec(e->kids()[0].get(), point, prec, memo) - eval_rec(e->kids()[1].get(), point, prec, memo);
      break;
    case NodeKind::Mul:
      r = eval_rec(e->kids()[0].get(), point, prec, memo) * eval_rec(e->kids()[1].get(), point, prec, memo);
      break;
    case NodeKind::Div:
      r = eval_rec(e->kids()[0].get(), point, prec, memo) / eval_rec(e->kids()[1].get(), point, prec, memo);
      break;
    case NodeKind::Sqrt: r = rigor::sqrt(eval_rec(e->kids()[0].get(), point, prec, memo)); break;
    case NodeKind::Log: r = rigor::log(eval_rec(e->kids()[0].get(), point, prec, memo)); break;
    case NodeKind::Exp: r = rigor::exp(eval_rec(e->kids()[0].get(), point, prec, memo)); break;
    case NodeKind::Floor: r = floor_points(eval_rec(e->kids()[0].get(), point, prec, memo)); break;
    case NodeKind::Max:
      r = rigor::max(eval_rec(e->kids()[0].get(), point, prec, memo),
                     eval_rec(e->kids()[1].get(), point, prec, memo));
      break;
    case NodeKind::Min:
      r = rigor::min(eval_rec(e->kids()[0].get(), point, prec, memo),
                     eval_rec(e->kids()[1].get(), point, prec, memo));
      break;
    case NodeKind::Pow:
      r = pow_rat(eval_rec(e->kids()[0].get(), point, prec, memo), e->exponent().num, e->exponent().den);
      break;
  }
  if (prec > 0) {
    CertScalar widened(prec);
    widened.set_endpoints(r.lo_raw(), r.hi_raw());
    r = widened;
  }
  memo.emplace(e, r);
  return r;
}

}  // namespace

CertScalar eval_at(const ExprPtr& e, const Point& point, int prec) {
  if (prec <= 0) prec = precision();
  Point widened;
  for (const auto& [k, v] : point) {
    CertScalar w(prec);
    w.set_endpoints(v.lo_raw(), v.hi_raw());
    widened.emplace(k, std::move(w));
  }
  std::unordered_map<const Expr*, CertScalar> memo;
  return eval_rec(e.get(), widened, prec, memo);
}

// ------------------------------------------------------------------ linear_in

LinearParts linear_in(const ExprPtr& e, const std::string& sym) {
  if (!contains_symbol(e, sym)) return {e, constant(0L)};
  switch (e->kind()) {
    case NodeKind::Symbol:
      return {constant(0L), constant(1L)};
    case NodeKind::Add: {
      auto a = linear_in(e->kids()[0], sym), b = linear_in(e->kids()[1], sym);
      return {add(a.offset, b.offset), add(a.slope, b.slope)};
    }
    case NodeKind::Sub: {
      auto a = linear_in(e->kids()[0], sym), b = linear_in(e->kids()[1], sym);
      return {sub(a.offset, b.offset), sub(a.slope, b.slope)};
    }
    case NodeKind::Mul: {
      bool l = contains_symbol(e->kids()[0], sym), r = contains_symbol(e->kids()[1], sym);
      if (l && r) fail(ErrorCode::NonlinearShape, "product of two " + sym + "-dependent factors");
      const ExprPtr& free = l ? e->kids()[1] : e->kids()[0];
      auto p = linear_in(l ? e->kids()[0] : e->kids()[1], sym);
      return {mul(free, p.offset), mul(free, p.slope)};
    }
    case NodeKind::Div: {
      if (contains_symbol(e->kids()[1], sym))
        fail(ErrorCode::NonlinearShape, sym + " in denominator");
      auto p = linear_in(e->kids()[0], sym);
      return {div(p.offset, e->kids()[1]), div(p.slope, e->kids()[1])};
    }
    default:
      fail(ErrorCode::NonlinearShape, "symbol " + sym + " under a nonlinear node");
  }
}

// ------------------------------------------------------------------ tail bounds

namespace {

struct DegPair {
  Rat deg, logdeg;
  bool operator==(const DegPair& o) const { return deg == o.deg && logdeg == o.logdeg; }
  bool operator<(const DegPair& o) const {
    if (deg == o.deg) return logdeg < o.logdeg;
    return deg < o.deg;
  }
};

// phi(Y) = Y^dd * (log Y)^dl at a point interval
CertScalar phi_at(const CertScalar& y, const Rat& dd, const Rat& dl) {
  CertScalar r = pow_rat(y, dd.num, dd.den);
  if (!dl.is_zero()) r = r * pow_rat(rigor::log(y), dl.num, dl.den);
  return r;
}

// Certified [0, sup] of phi(Y) = Y^dd (log Y)^dl over [ycap, inf) for
// (dd, dl) <= (0,0) lexicographically. Requires ycap >= 3 (so log > 1).
CertScalar phi_range(const Rat& dd, const Rat& dl, const CertScalar& ycap) {
  CertScalar zero = CertScalar::exact(0);
  if (dd.is_zero() && dl.is_zero()) return CertScalar::exact(1);
  if (dd.is_zero()) {
    // dl < 0: decreasing on [3, inf)
    return CertScalar::hull(zero, phi_at(ycap, dd, dl));
  }
  // dd < 0. Stationary point at log Y* = -dl/dd; to its right phi decreases.
  if (dl.num <= 0) return CertScalar::hull(zero, phi_at(ycap, dd, dl));
  Rat ratio = Rat(-dl.num * dd.den, dl.den * dd.num);  // -dl/dd > 0
  CertScalar ystar = rigor::exp(ratio.to_interval());
  CertScalar at_cap = phi_at(ycap, dd, dl);
  if (ystar.certainly_le(ycap)) return CertScalar::hull(zero, at_cap);
  CertScalar at_star = phi_at(CertScalar::hull(ycap, ystar), dd, dl);
  return CertScalar::hull(zero, rigor::max(at_cap, at_star));
}

TailBound rebase(const TailBound& t, const DegPair& target, const CertScalar& ycap) {
  DegPair cur{t.deg, t.logdeg};
  if (cur == target) return t;
  Rat dd = t.deg - target.deg;
  Rat dl = t.logdeg - target.logdeg;
  TailBound r;
  r.deg = target.deg;
  r.logdeg = target.logdeg;
  r.unbounded = t.unbounded;
  r.env = t.env * phi_range(dd, dl, ycap);
  return r;
}

TailBound tail_rec(const Expr* e, const std::string& sym, const CertScalar& ycap,
                   const Point& others,
                   std::unordered_map<const Expr*, TailBound>& memo);

TailBound tail_binary_addsub(const Expr* e, bool is_sub, const std::string& sym,
                             const CertScalar& ycap, const Point& others,
                             std::unordered_map<const Expr*, TailBound>& memo) {
  TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
  TailBound b = tail_rec(e->kids()[1].get(), sym, ycap, others, memo);
  DegPair da{a.deg, a.logdeg}, db{b.deg, b.logdeg};
  DegPair top = da < db ? db : da;
  TailBound ra = rebase(a, top, ycap), rb = rebase(b, top, ycap);
  TailBound r;
  r.deg = top.deg;
  r.logdeg = top.logdeg;
  r.unbounded = a.unbounded || b.unbounded;
  r.env = is_sub ? ra.env - rb.env : ra.env + rb.env;
  return r;
}

TailBound tail_rec(const Expr* e, const std::string& sym, const CertScalar& ycap,
                   const Point& others,
                   std::unordered_map<const Expr*, TailBound>& memo) {
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  TailBound r;
  switch (e->kind()) {
    case NodeKind::Const:
      r.env = e->value();
      break;
    case NodeKind::Symbol: {
      if (e->symbol() == sym) {
        r.deg = Rat(1);
        r.env = CertScalar::exact(1);
      } else {
        auto p = others.find(e->symbol());
        if (p == others.end()) fail(ErrorCode::UndeclaredSymbol, e->symbol());
        r.env = p->second;
      }
      break;
    }
    case NodeKind::Add:
      r = tail_binary_addsub(e, false, sym, ycap, others, memo);
      break;
    case NodeKind::Sub:
      r = tail_binary_addsub(e, true, sym, ycap, others, memo);
      break;
    case NodeKind::Mul: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      TailBound b = tail_rec(e->kids()[1].get(), sym, ycap, others, memo);
      r.deg = a.deg + b.deg;
      r.logdeg = a.logdeg + b.logdeg;
      r.env = a.env * b.env;
      r.unbounded = a.unbounded || b.unbounded;
      break;
    }
    case NodeKind::Div: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      TailBound b = tail_rec(e->kids()[1].get(), sym, ycap, others, memo);
      if (b.unbounded || b.env.contains_zero())
        fail(ErrorCode::TailAnalysisFailed, "denominator envelope spans 0");
      r.deg = a.deg - b.deg;
      r.logdeg = a.logdeg - b.logdeg;
      r.env = a.env / b.env;
      r.unbounded = a.unbounded;
      break;
    }
    case NodeKind::Sqrt: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      if (a.unbounded) fail(ErrorCode::TailAnalysisFailed, "sqrt of unmodeled growth");
      r.deg = a.deg.half();
      r.logdeg = a.logdeg.half();
      r.env = rigor::sqrt(a.env);
      break;
    }
    case NodeKind::Log: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      if (a.unbounded) fail(ErrorCode::TailAnalysisFailed, "log of unmodeled growth");
      if (!a.env.is_positive())
        fail(ErrorCode::TailAnalysisFailed, "log argument envelope not positive");
      if (a.deg.is_zero() && a.logdeg.is_zero()) {
        r.env = rigor::log(a.env);
        break;
      }
      // log f = deg*logY + logdeg*loglogY + log(env part); report per logY.
      r.logdeg = Rat(1);
      CertScalar logcap = rigor::log(ycap);
      CertScalar zero = CertScalar::exact(0);
      CertScalar term = a.deg.to_interval();
      if (!a.logdeg.is_zero()) {
        // loglogY/logY on [ycap, inf): positive, <= max(value at ycap, 1/e)
        CertScalar at_cap = rigor::log(logcap) / logcap;
        CertScalar inv_e = CertScalar::exact(1) / rigor::exp(CertScalar::exact(1));
        CertScalar supv = rigor::max(at_cap, inv_e);
        term = term + a.logdeg.to_interval() * CertScalar::hull(zero, supv);
      }
      term = term + CertScalar::hull(zero, rigor::log(a.env) / logcap);
      r.env = term;
      break;
    }
    case NodeKind::Exp: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      DegPair zero_deg{Rat(0), Rat(0)};
      DegPair da{a.deg, a.logdeg};
      if (a.unbounded) fail(ErrorCode::TailAnalysisFailed, "exp of unmodeled growth");
      if (da == zero_deg) {
        r.env = rigor::exp(a.env);
      } else if (zero_deg < da) {
        if (a.env.is_negative()) {
          // f <= env.hi * phi(ycap) <= 0, so exp(f) in [0, exp(env.hi*phi(ycap))]
          CertScalar cap = phi_at(ycap, a.deg, a.logdeg);
          mpfr_t tmp;
          mpfr_init2(tmp, a.env.prec());
          mpfr_set(tmp, a.env.hi_raw(), MPFR_RNDU);
          CertScalar hiv(a.env.prec());
          hiv.set_endpoints(tmp, tmp);
          mpfr_clear(tmp);
          r.env = CertScalar::hull(CertScalar::exact(0), rigor::exp(hiv * cap));
        } else {
          r.unbounded = true;
          r.env = CertScalar::pos_inf();
        }
      } else {
        // decaying argument: f in hull(0, env*phi-sup)
        CertScalar rng = a.env * phi_range(a.deg, a.logdeg, ycap);
        r.env = rigor::exp(CertScalar::hull(CertScalar::exact(0), rng));
      }
      break;
    }
    case NodeKind::Floor: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      if (a.unbounded) fail(ErrorCode::TailAnalysisFailed, "floor of unmodeled growth");
      DegPair zero_deg{Rat(0), Rat(0)};
      DegPair da{a.deg, a.logdeg};
      if (da == zero_deg) {
        r.env = floor_points(a.env);
      } else if (zero_deg < da) {
        // floor(f) in [f-1, f]; normalized, the -1 contributes 1/phi(ycap)
        CertScalar slack = CertScalar::exact(1) / phi_at(ycap, a.deg, a.logdeg);
        r.deg = a.deg;
        r.logdeg = a.logdeg;
        r.env = a.env - CertScalar::hull(CertScalar::exact(0), slack);
      } else {
        fail(ErrorCode::TailAnalysisFailed, "floor of a decaying quantity");
      }
      break;
    }
    case NodeKind::Max:
    case NodeKind::Min: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      TailBound b = tail_rec(e->kids()[1].get(), sym, ycap, others, memo);
      if (a.unbounded || b.unbounded)
        fail(ErrorCode::TailAnalysisFailed, "max/min of unmodeled growth");
      DegPair da{a.deg, a.logdeg}, db{b.deg, b.logdeg};
      DegPair top = da < db ? db : da;
      TailBound ra = rebase(a, top, ycap), rb = rebase(b, top, ycap);
      r.deg = top.deg;
      r.logdeg = top.logdeg;
      r.env = e->kind() == NodeKind::Max ? rigor::max(ra.env, rb.env) : rigor::min(ra.env, rb.env);
      break;
    }
    case NodeKind::Pow: {
      TailBound a = tail_rec(e->kids()[0].get(), sym, ycap, others, memo);
      if (a.unbounded) fail(ErrorCode::TailAnalysisFailed, "pow of unmodeled growth");
      const Rat& ex = e->exponent();
      r.deg = a.deg * ex;
      r.logdeg = a.logdeg * ex;
      r.env = pow_rat(a.env, ex.num, ex.den);
      break;
    }
  }
  memo.emplace(e, r);
  return r;
}

}  // namespace

TailBound tail_bound(const ExprPtr& e, const std::string& sym, const CertScalar& ycap,
                     const Point& others) {
  if (!CertScalar::exact(3).certainly_le(ycap))
    fail(ErrorCode::TailAnalysisFailed, "tail analysis requires ycap >= 3");
  std::unordered_map<const Expr*, TailBound> memo;
  return tail_rec(e.get(), sym, ycap, others, memo);
}

// ------------------------------------------------------------------ sup / inf

namespace {

// Upper bound for f over [ycap, inf) from a tail envelope.
CertScalar tail_sup_value(const TailBound& t, const CertScalar& ycap) {
  if (t.unbounded) return CertScalar::pos_inf();
  DegPair zero_deg{Rat(0), Rat(0)};
  DegPair d{t.deg, t.logdeg};
  if (d == zero_deg) return t.env;
  if (zero_deg < d) {
    if (t.env.is_negative() || t.env.contains_zero()) {
      // f <= max(0, env.hi * phi) and phi >= phi(ycap) grows: only safe if
      // env.hi <= 0, else unbounded above.
      mpfr_t tmp;
      mpfr_init2(tmp, t.env.prec());
      mpfr_set(tmp, t.env.hi_raw(), MPFR_RNDU);
      CertScalar hiv;
      hiv.set_endpoints(tmp, tmp);
      mpfr_clear(tmp);
      if (hiv.is_nonnegative() && !hiv.contains_zero()) return CertScalar::pos_inf();
      if (hiv.contains_zero()) return CertScalar::exact(0);
      return hiv * phi_at(ycap, t.deg, t.logdeg);  // negative, phi minimal at ycap
    }
    return CertScalar::pos_inf();
  }
  // decaying: f in env * (0, phi_sup]
  CertScalar rng = t.env * phi_range(t.deg, t.logdeg, ycap);
  return rigor::max(rng, CertScalar::exact(0));
}

struct Piece {
  CertScalar y;   // subinterval of the symbol
  CertScalar v;   // f evaluated over it
};

CertScalar whole_line(int prec) {
  CertScalar r(prec);
  mpfr_t lo, hi;
  mpfr_init2(lo, prec);
  mpfr_init2(hi, prec);
  mpfr_set_inf(lo, -1);
  mpfr_set_inf(hi, 1);
  r.set_endpoints(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

CertScalar point_at(const CertScalar& x, bool lo_end) {
  CertScalar p(x.prec());
  if (lo_end)
    p.set_endpoints(x.lo_raw(), x.lo_raw());
  else
    p.set_endpoints(x.hi_raw(), x.hi_raw());
  return p;
}

CertScalar midpoint(const CertScalar& x) {
  mpfr_t m;
  mpfr_init2(m, x.prec());
  mpfr_add(m, x.lo_raw(), x.hi_raw(), MPFR_RNDN);
  mpfr_div_ui(m, m, 2, MPFR_RNDN);
  CertScalar r(x.prec());
  r.set_endpoints(m, m);
  mpfr_clear(m);
  return r;
}

// Branch-and-bound sup of f over the closed interval span. Pieces whose
// endpoints have ratio > 4 split at the geometric mean, which keeps the piece
// count manageable over multi-decade spans.
CertScalar bb_sup(const ExprPtr& e, const std::string& sym, CertScalar span,
                  const Point& others, const SupOptions& opts) {
  Point pt = others;
  // Wide subintervals can make intermediate denominators straddle 0 even when
  // the function is fine pointwise; such pieces evaluate to the whole line and
  // get refined.
  auto eval_on = [&](const CertScalar& y) {
    pt[sym] = y;
    try {
      return eval_at(e, pt);
    } catch (const Error&) {
      return whole_line(precision());
    }
  };
  auto split_point = [](const CertScalar& y) {
    if (mpfr_sgn(y.lo_raw()) > 0) {
      mpfr_t q;
      mpfr_init2(q, y.prec());
      mpfr_div(q, y.hi_raw(), y.lo_raw(), MPFR_RNDN);
      bool geometric = mpfr_cmp_ui(q, 4) > 0;
      mpfr_clear(q);
      if (geometric) {
        mpfr_t m;
        mpfr_init2(m, y.prec());
        mpfr_mul(m, y.lo_raw(), y.hi_raw(), MPFR_RNDN);
        mpfr_sqrt(m, m, MPFR_RNDN);
        CertScalar r(y.prec());
        r.set_endpoints(m, m);
        mpfr_clear(m);
        return r;
      }
    }
    return midpoint(y);
  };
  std::deque<Piece> pieces;
  pieces.push_back({span, eval_on(span)});
  CertScalar witness = eval_on(midpoint(span));
  mpfr_t wit;
  mpfr_init2(wit, witness.prec());
  mpfr_set(wit, witness.lo_raw(), MPFR_RNDD);
  int budget = opts.max_pieces;
  while (budget-- > 0) {
    size_t best = 0;
    for (size_t i = 1; i < pieces.size(); ++i)
      if (mpfr_cmp(pieces[i].v.hi_raw(), pieces[best].v.hi_raw()) > 0) best = i;
    double hi = mpfr_get_d(pieces[best].v.hi_raw(), MPFR_RNDU);
    double w = mpfr_get_d(wit, MPFR_RNDD);
    double scale = std::max(std::abs(hi), std::abs(w));
    if (scale == 0 || hi - w <= opts.rel_tol * scale) break;
    Piece p = pieces[best];
    pieces.erase(pieces.begin() + (long)best);
    CertScalar m = split_point(p.y);
    CertScalar left(p.y.prec()), right(p.y.prec());
    left.set_endpoints(p.y.lo_raw(), m.hi_raw());
    right.set_endpoints(m.lo_raw(), p.y.hi_raw());
    for (const auto& half : {left, right}) {
      Piece np{half, eval_on(half)};
      try {
        pt[sym] = midpoint(half);
        CertScalar pm = eval_at(e, pt);
        if (mpfr_cmp(pm.lo_raw(), wit) > 0) mpfr_set(wit, pm.lo_raw(), MPFR_RNDD);
      } catch (const Error&) {
      }
      pieces.push_back(np);
    }
  }
  mpfr_t top;
  mpfr_init2(top, span.prec());
  mpfr_set_inf(top, -1);
  for (auto& p : pieces) mpfr_max(top, top, p.v.hi_raw(), MPFR_RNDU);
  CertScalar r(span.prec());
  r.set_endpoints(wit, top);
  mpfr_clear(wit);
  mpfr_clear(top);
  return r;
}

}  // namespace

// Unbounded domains: naive interval evaluation degrades over wide spans (the
// dependency problem), so the certified upper bound comes from tail envelopes
// anchored at a handful of geometrically spaced points; the envelope anchored
// at a covers all of [a, inf), and re-anchoring further right only tightens
// it. Point probes supply the witness side.
CertScalar sup_over_domain(const ExprPtr& e, const std::string& sym, const Domain& dom,
                           const Point& others, const SupOptions& opts) {
  auto it = dom.find(sym);
  if (it == dom.end()) fail(ErrorCode::UndeclaredSymbol, sym + " missing from domain");
  const SymbolRange& range = it->second;
  if (range.bounded) {
    CertScalar span(range.lo.prec());
    span.set_endpoints(range.lo.lo_raw(), range.hi.hi_raw());
    return bb_sup(e, sym, span, others, opts);
  }

  const CertScalar three = CertScalar::exact(3);
  CertScalar start = rigor::max(range.lo, three);
  Point pt = others;
  mpfr_t wit, top;
  mpfr_init2(wit, precision());
  mpfr_init2(top, precision());
  mpfr_set_inf(wit, -1);
  mpfr_set_inf(top, -1);
  auto probe = [&](const CertScalar& y) {
    try {
      pt[sym] = y;
      CertScalar v = eval_at(e, pt);
      if (mpfr_cmp(v.lo_raw(), wit) > 0) mpfr_set(wit, v.lo_raw(), MPFR_RNDD);
    } catch (const Error&) {
    }
  };

  // The envelope anchored at `start` covers all of [start, inf).
  bool have_bound = false;
  bool unbounded = false;
  try {
    TailBound t = tail_bound(e, sym, point_at(start, true), others);
    CertScalar s = tail_sup_value(t, point_at(start, true));
    if (s.hi_is_inf()) {
      unbounded = true;
    } else {
      mpfr_max(top, top, s.hi_raw(), MPFR_RNDU);
      have_bound = true;
    }
  } catch (const Error&) {
    unbounded = true;
  }

  CertScalar y = start;
  for (int k = 0; k < 8; ++k) {
    probe(y);
    y = y * CertScalar::exact(10);
  }
  probe(start * CertScalar::exact_double(opts.tail_factor));

  CertScalar head;
  bool have_head = false;
  if (range.lo.certainly_lt(three)) {
    CertScalar span(range.lo.prec());
    span.set_endpoints(range.lo.lo_raw(), three.hi_raw());
    head = bb_sup(e, sym, span, others, opts);
    have_head = true;
  }

  CertScalar r(precision());
  if (unbounded || !have_bound) {
    mpfr_t inf;
    mpfr_init2(inf, precision());
    mpfr_set_inf(inf, 1);
    r.set_endpoints(wit, inf);
    mpfr_clear(inf);
  } else {
    r.set_endpoints(wit, top);
  }
  mpfr_clear(wit);
  mpfr_clear(top);
  if (have_head) r = rigor::max(r, head);
  return r;
}

CertScalar inf_over_domain(const ExprPtr& e, const std::string& sym, const Domain& dom,
                           const Point& others, const SupOptions& opts) {
  ExprPtr neg = sub(constant(0L), e);
  return -sup_over_domain(neg, sym, dom, others, opts);
}

// ------------------------------------------------------------------ parser

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) { ++i; return true; }
    return false;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void err(const std::string& what) {
    fail(ErrorCode::ParseError, what + " at position " + std::to_string(i) + " in '" + s + "'");
  }

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (i != s.size()) err("trailing input");
    return e;
  }

  ExprPtr expr() {
    ExprPtr lhs;
    if (peek() == '-') { ++i; lhs = sub(constant(0L), term()); }
    else if (peek() == '+') { ++i; lhs = term(); }
    else lhs = term();
    for (;;) {
      char c = peek();
      if (c == '+') { ++i; lhs = add(lhs, term()); }
      else if (c == '-') { ++i; lhs = sub(lhs, term()); }
      else return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      char c = peek();
      if (c == '*') { ++i; lhs = mul(lhs, factor()); }
      else if (c == '/') { ++i; lhs = div(lhs, factor()); }
      else return lhs;
    }
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (peek() == '^') {
      ++i;
      Rat ex = exponent();
      return pow(base, ex);
    }
    return base;
  }

  long integer() {
    skip();
    bool negated = eat('-');
    size_t start = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
    if (start == i) err("expected integer");
    long v = std::stol(s.substr(start, i - start));
    return negated ? -v : v;
  }

  Rat exponent() {
    if (eat('(')) {
      long n = integer();
      if (!eat('/')) err("expected / in rational exponent");
      long d = integer();
      if (!eat(')')) err("expected ) after rational exponent");
      return Rat(n, d);
    }
    return Rat(integer());
  }

  ExprPtr atom() {
    skip();
    if (i >= s.size()) err("unexpected end");
    char c = s[i];
    if (c == '(') {
      ++i;
      ExprPtr e = expr();
      if (!eat(')')) err("expected )");
      return e;
    }
    if (std::isdigit((unsigned char)c) || c == '.') return number();
    if (std::isalpha((unsigned char)c) || c == '_') return ident();
    err("unexpected character");
  }

  ExprPtr number() {
    size_t start = i;
    while (i < s.size() && (std::isdigit((unsigned char)s[i]) || s[i] == '.')) ++i;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
      size_t save = i;
      ++i;
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
      if (i < s.size() && std::isdigit((unsigned char)s[i])) {
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      } else {
        i = save;
      }
    }
    return constant_str(s.substr(start, i - start));
  }

  ExprPtr ident() {
    size_t start = i;
    while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
    std::string name = s.substr(start, i - start);
    if (name == "pi") return constant(CertScalar::pi());
    if (peek() == '(') {
      ++i;
      std::vector<ExprPtr> args;
      args.push_back(expr());
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) err("expected ) after arguments");
      auto arity = [&](size_t n) {
        if (args.size() != n) err(name + " expects " + std::to_string(n) + " argument(s)");
      };
      if (name == "sqrt") { arity(1); return rigor::sqrt(args[0]); }
      if (name == "log") { arity(1); return rigor::log(args[0]); }
      if (name == "exp") { arity(1); return rigor::exp(args[0]); }
      if (name == "floor") { arity(1); return rigor::floor(args[0]); }
      if (name == "max") { arity(2); return rigor::max(args[0], args[1]); }
      if (name == "min") { arity(2); return rigor::min(args[0], args[1]); }
      err("unknown function " + name);
    }
    return symbol(name);
  }
};

void print_rec(const ExprPtr& e, std::ostringstream& os) {
  switch (e->kind()) {
    case NodeKind::Const: {
      // print the midpoint at full precision; round-trip tests compare trees
      // parsed from this form, so use enough digits for exactness
      char* s = nullptr;
      mpfr_exp_t ex;
      s = mpfr_get_str(nullptr, &ex, 10, 0, e->value().lo_raw(), MPFR_RNDD);
      std::string body(s);
      mpfr_free_str(s);
      std::string sign;
      if (!body.empty() && body[0] == '-') { sign = "-"; body = body.substr(1); }
      if (body.find_first_not_of('0') == std::string::npos) { os << "0"; break; }
      if (!sign.empty()) os << "(0 - ";
      os << "0." << body << "e" << ex;
      if (!sign.empty()) os << ")";
      break;
    }
    case NodeKind::Symbol: os << e->symbol(); break;
    case NodeKind::Add: os << "("; print_rec(e->kids()[0], os); os << " + "; print_rec(e->kids()[1], os); os << ")"; break;
    case NodeKind::Sub: os << "("; print_rec(e->kids()[0], os); os << " - "; print_rec(e->kids()[1], os); os << ")"; break;
    case NodeKind::Mul: os << "("; print_rec(e->kids()[0], os); os << " * "; print_rec(e->kids()[1], os); os << ")"; break;
    case NodeKind::Div: os << "("; print_rec(e->kids()[0], os); os << " / "; print_rec(e->kids()[1], os); os << ")"; break;
    case NodeKind::Sqrt: os << "sqrt("; print_rec(e->kids()[0], os); os << ")"; break;
    case NodeKind::Log: os << "log("; print_rec(e->kids()[0], os); os << ")"; break;
    case NodeKind::Exp: os << "exp("; print_rec(e->kids()[0], os); os << ")"; break;
    case NodeKind::Floor: os << "floor("; print_rec(e->kids()[0], os); os << ")"; break;
    case NodeKind::Max: os << "max("; print_rec(e->kids()[0], os); os << ", "; print_rec(e->kids()[1], os); os << ")"; break;
    case NodeKind::Min: os << "min("; print_rec(e->kids()[0], os); os << ", "; print_rec(e->kids()[1], os); os << ")"; break;
    case NodeKind::Pow:
      print_rec(e->kids()[0], os);
      if (e->exponent().den == 1) os << "^" << e->exponent().num;
      else os << "^(" << e->exponent().num << "/" << e->exponent().den << ")";
      break;
  }
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).parse(); }

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_rec(e, os);
  return os.str();
}

}  // namespace lfl3::rigor
