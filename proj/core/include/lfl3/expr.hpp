#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lfl3/interval.hpp"

namespace lfl3::rigor {

// Small exact rational, used for degrees and pow exponents.
struct Rat {
  long num = 0;
  long den = 1;
  Rat() = default;
  Rat(long n, long d = 1);
  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator-() const { return Rat(-num, den); }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool is_zero() const { return num == 0; }
  Rat half() const { return Rat(num, den * 2); }
  CertScalar to_interval(int prec = 0) const;
};

enum class NodeKind { Const, Symbol, Add, Sub, Mul, Div, Sqrt, Log, Exp, Floor, Max, Min, Pow };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  Expr(NodeKind k, std::vector<ExprPtr> kids) : kind_(k), kids_(std::move(kids)) {}
  Expr(CertScalar v) : kind_(NodeKind::Const), value_(std::move(v)) {}
  Expr(std::string sym) : kind_(NodeKind::Symbol), symbol_(std::move(sym)) {}
  Expr(ExprPtr base, Rat e) : kind_(NodeKind::Pow), exponent_(e), kids_{std::move(base)} {}

  NodeKind kind() const { return kind_; }
  const CertScalar& value() const { return value_; }
  const std::string& symbol() const { return symbol_; }
  const Rat& exponent() const { return exponent_; }
  const std::vector<ExprPtr>& kids() const { return kids_; }

 private:
  NodeKind kind_;
  CertScalar value_;
  std::string symbol_;
  Rat exponent_;
  std::vector<ExprPtr> kids_;
};

ExprPtr constant(CertScalar v);
ExprPtr constant(long v);
ExprPtr constant_str(const std::string& decimal);
ExprPtr symbol(const std::string& name);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr sqrt(ExprPtr a);
ExprPtr log(ExprPtr a);
ExprPtr exp(ExprPtr a);
ExprPtr floor(ExprPtr a);
ExprPtr max(ExprPtr a, ExprPtr b);
ExprPtr min(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, Rat e);

bool contains_symbol(const ExprPtr& e, const std::string& sym);
void collect_symbols(const ExprPtr& e, std::vector<std::string>& out);
ExprPtr substitute(const ExprPtr& e, const std::string& sym, const ExprPtr& repl);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

using Point = std::map<std::string, CertScalar>;

// Interval evaluation; `point` values may be proper intervals. Result contains
// every exact value of the expression over the supplied box.
CertScalar eval_at(const ExprPtr& e, const Point& point, int prec = 0);

// Decompose e == offset + slope * sym with slope independent of sym.
// Throws NonlinearShape when sym appears non-affinely.
struct LinearParts {
  ExprPtr offset;
  ExprPtr slope;
};
LinearParts linear_in(const ExprPtr& e, const std::string& sym);

// Certified envelope of f over a tail [ycap, inf): for all Y >= ycap,
//   f(Y) / (Y^deg * (log Y)^logdeg)  lies in  env.
// `unbounded` marks growth outside the modeled fragment (exp of a growing
// argument); such values admit no finite tail bound.
struct TailBound {
  Rat deg;
  Rat logdeg;
  CertScalar env;
  bool unbounded = false;
};

TailBound tail_bound(const ExprPtr& e, const std::string& sym, const CertScalar& ycap,
                     const Point& others = {});

struct SymbolRange {
  CertScalar lo;
  bool bounded = false;
  CertScalar hi;  // meaningful when bounded
};
using Domain = std::map<std::string, SymbolRange>;

struct SupOptions {
  double rel_tol = 1e-9;
  int max_pieces = 4000;
  // Subdivided interval ends at dmin * tail_factor, beyond which the
  // leading-order tail analysis takes over.
  double tail_factor = 1e6;
  bool fast = false;  // single tail envelope anchored at dmin, no subdivision
};

// Value v with v.hi >= sup f over the domain of `sym` (other symbols fixed via
// `others`). v.lo is a witness (a value f provably attains or exceeds), so
// v.lo <= sup <= v.hi. Unbounded supremum yields hi = +inf.
CertScalar sup_over_domain(const ExprPtr& e, const std::string& sym, const Domain& dom,
                           const Point& others = {}, const SupOptions& opts = {});
CertScalar inf_over_domain(const ExprPtr& e, const std::string& sym, const Domain& dom,
                           const Point& others = {}, const SupOptions& opts = {});

// Parser/printer for the config expression grammar (schema_version 1):
// numbers, `pi`, symbols, + - * /, ^ with integer or (p/q) exponents, and
// sqrt log exp floor max min.
ExprPtr parse_expr(const std::string& text);
std::string print_expr(const ExprPtr& e);

}  // namespace lfl3::rigor
