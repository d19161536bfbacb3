#include "lfl3/problem.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lfl3/toml.hpp"

namespace lfl3::problem {

using config::TomlTable;
using config::TomlValue;
using rigor::SymbolRange;

namespace {

const std::set<std::string> kFormKeys = {"case", "D", "cD", "w", "d1", "d2"};
const std::set<std::string> kAlphaKeys = {"height", "abs_log", "log_abs", "nu"};
const std::set<std::string> kCoeffKeys = {"role", "bound", "positive"};
const std::set<std::string> kLambdaKeys = {"log_upper"};
const std::set<std::string> kSymbolKeys = {"min", "max"};

void check_keys(const TomlTable& t, const std::string& section,
                const std::set<std::string>& allowed) {
  auto it = t.sections.find(section);
  if (it == t.sections.end()) return;
  for (const auto& [k, v] : it->second)
    if (!allowed.count(k))
      fail(ErrorCode::SchemaError, "unknown key '" + k + "' in [" + section + "]");
}

ExprPtr parse_field(const TomlTable& t, const std::string& section, const std::string& key,
                    std::string* src) {
  const TomlValue& v = t.get(section, key);
  *src = v.text;
  return rigor::parse_expr(v.text);
}

void ensure_symbols_within(const ExprPtr& e, const std::set<std::string>& allowed,
                           const std::string& where) {
  std::vector<std::string> syms;
  rigor::collect_symbols(e, syms);
  for (const auto& s : syms)
    if (!allowed.count(s))
      fail(ErrorCode::SchemaError, where + " references undeclared symbol '" + s + "'");
}

}  // namespace

LinearFormProblem load_problem(const std::string& text) {
  TomlTable t = config::parse_toml(text);

  // structural checks: known sections only, exactly 3 alphas / coeffs
  for (const auto& sec : t.section_order) {
    if (sec.empty()) continue;
    if (sec == "form" || sec == "lambda") continue;
    if (sec.rfind("alpha.", 0) == 0) {
      std::string idx = sec.substr(6);
      if (idx != "1" && idx != "2" && idx != "3")
        fail(ErrorCode::SchemaError, "unexpected section [" + sec + "] (alphas are 1..3)");
      continue;
    }
    if (sec.rfind("coeff.", 0) == 0) {
      std::string idx = sec.substr(6);
      if (idx != "1" && idx != "2" && idx != "3")
        fail(ErrorCode::SchemaError, "unexpected section [" + sec + "] (coeffs are 1..3)");
      continue;
    }
    if (sec.rfind("symbols.", 0) == 0) continue;
    fail(ErrorCode::SchemaError, "unknown section [" + sec + "]");
  }
  auto version = t.get_int("", "schema_version");
  if (!version || *version != 1)
    fail(ErrorCode::SchemaError, "schema_version must be 1");

  LinearFormProblem p;
  check_keys(t, "form", kFormKeys);
  auto cs = t.get_str("form", "case");
  if (!cs || (*cs != "real" && *cs != "imaginary"))
    fail(ErrorCode::SchemaError, "form.case must be \"real\" or \"imaginary\"");
  p.form_case = (*cs == "real") ? FormCase::Real : FormCase::Imaginary;
  auto D = t.get_int("form", "D");
  auto cD = t.get_int("form", "cD");
  if (!D || !cD) fail(ErrorCode::SchemaError, "form.D and form.cD are required");
  if (*D < 1 || *cD < 1) fail(ErrorCode::DomainError, "form.D and form.cD must be >= 1");
  p.D = (int)*D;
  p.cD = (int)*cD;
  p.w_bound = (int)t.get_int("form", "w").value_or(0);
  if (p.w_bound < 0) fail(ErrorCode::DomainError, "form.w must be positive when present");
  p.d1 = t.get_int("form", "d1").value_or(1);
  p.d2 = t.get_int("form", "d2").value_or(1);
  if (p.d1 < 1 || p.d2 < 1) fail(ErrorCode::DomainError, "gcd hints must be >= 1");

  // symbols
  for (const auto& sec : t.section_order) {
    if (sec.rfind("symbols.", 0) != 0) continue;
    std::string name = sec.substr(8);
    if (name.empty()) fail(ErrorCode::SchemaError, "empty symbol name");
    check_keys(t, sec, kSymbolKeys);
    auto mn = t.get_str(sec, "min");
    if (!mn) fail(ErrorCode::SchemaError, "[" + sec + "] needs min");
    SymbolRange r;
    r.lo = rigor::eval_at(rigor::parse_expr(*mn), {});
    if (!CertScalar::exact(1).certainly_lt(r.lo))
      fail(ErrorCode::DomainError, "symbol " + name + " lower bound must exceed 1");
    if (auto mx = t.get_str(sec, "max")) {
      r.bounded = true;
      r.hi = rigor::eval_at(rigor::parse_expr(*mx), {});
      if (!r.lo.certainly_le(r.hi))
        fail(ErrorCode::DomainError, "symbol " + name + " has empty range");
    }
    p.symbols[name] = r;
  }
  if (!p.symbols.count(kTargetSymbol))
    fail(ErrorCode::SchemaError, "[symbols.P] is required (target coefficient floor)");
  for (const auto& [name, r] : p.symbols) {
    if (name == kTargetSymbol) continue;
    if (!p.scale_symbol.empty())
      fail(ErrorCode::SchemaError, "exactly one non-P symbol is supported, found '" +
                                       p.scale_symbol + "' and '" + name + "'");
    p.scale_symbol = name;
  }
  if (p.scale_symbol.empty())
    fail(ErrorCode::SchemaError, "a scale symbol (e.g. [symbols.Y]) is required");

  std::set<std::string> scale_only = {p.scale_symbol};
  std::set<std::string> scale_and_p = {p.scale_symbol, kTargetSymbol};
  std::set<std::string> p_only = {kTargetSymbol};

  // alphas
  int root_count = 0;
  for (int i = 0; i < 3; ++i) {
    std::string sec = "alpha." + std::to_string(i + 1);
    if (!t.sections.count(sec)) fail(ErrorCode::SchemaError, "missing section [" + sec + "]");
    check_keys(t, sec, kAlphaKeys);
    AlgebraicNumberSpec& a = p.alphas[i];
    a.height = parse_field(t, sec, "height", &a.height_src);
    a.abs_log = parse_field(t, sec, "abs_log", &a.abs_log_src);
    if (t.has(sec, "log_abs")) {
      a.log_abs = parse_field(t, sec, "log_abs", &a.log_abs_src);
    } else if (p.form_case == FormCase::Real) {
      a.log_abs = a.abs_log;  // real case: log|alpha| = |log alpha|
      a.log_abs_src = a.abs_log_src;
    } else {
      a.log_abs = rigor::constant(0L);
      a.log_abs_src = "0";
    }
    a.root_of_unity_order = (int)t.get_int(sec, "nu").value_or(0);
    if (a.root_of_unity_order == 1)
      fail(ErrorCode::DomainError, "root of unity order must be >= 2");
    if (a.root_of_unity_order > 0) {
      ++root_count;
      p.root_slot = i;
    }
    ensure_symbols_within(a.height, scale_only, sec + ".height");
    ensure_symbols_within(a.abs_log, scale_only, sec + ".abs_log");
    ensure_symbols_within(a.log_abs, scale_only, sec + ".log_abs");
  }
  if (root_count > 1)
    fail(ErrorCode::SchemaError, "at most one alpha may be declared a root of unity");
  if (p.form_case == FormCase::Real && root_count > 0)
    fail(ErrorCode::SchemaError, "real case requires multiplicative independence");
  p.mult = root_count == 1 ? MultStructure::OneRootOfUnity : MultStructure::AllIndependent;

  // coefficients
  int targets = 0;
  for (int i = 0; i < 3; ++i) {
    std::string sec = "coeff." + std::to_string(i + 1);
    if (!t.sections.count(sec)) fail(ErrorCode::SchemaError, "missing section [" + sec + "]");
    check_keys(t, sec, kCoeffKeys);
    CoefficientSpec& c = p.coeffs[i];
    auto role = t.get_str(sec, "role");
    if (!role || (*role != "target" && *role != "bounded"))
      fail(ErrorCode::SchemaError, sec + ".role must be \"target\" or \"bounded\"");
    if (*role == "target") {
      c.role = CoeffRole::Target;
      c.upper_bound = rigor::symbol(kTargetSymbol);
      c.bound_src = kTargetSymbol;
      ++targets;
      p.target_slot = i;
    } else {
      c.role = CoeffRole::Bounded;
      c.upper_bound = parse_field(t, sec, "bound", &c.bound_src);
      ensure_symbols_within(c.upper_bound, p_only, sec + ".bound");
    }
    if (t.has(sec, "positive")) c.known_positive = t.get(sec, "positive").boolean;
  }
  if (targets != 1)
    fail(ErrorCode::SchemaError, "exactly one coefficient must have role \"target\"");

  // lambda
  if (!t.sections.count("lambda")) fail(ErrorCode::SchemaError, "missing section [lambda]");
  check_keys(t, "lambda", kLambdaKeys);
  p.lambda_log_upper = parse_field(t, "lambda", "log_upper", &p.lambda_src);
  ensure_symbols_within(p.lambda_log_upper, scale_and_p, "lambda.log_upper");

  // basic domain check: every alpha datum evaluates over the domain corner
  rigor::Point corner{{p.scale_symbol, p.scale_min()}, {kTargetSymbol, p.p_floor()}};
  for (int i = 0; i < 3; ++i) {
    CertScalar h = rigor::eval_at(p.alphas[i].height, corner);
    CertScalar al = rigor::eval_at(p.alphas[i].abs_log, corner);
    if (!h.is_nonnegative())
      fail(ErrorCode::DomainError, "alpha." + std::to_string(i + 1) + " height negative at corner");
    if (!al.is_nonnegative())
      fail(ErrorCode::DomainError, "alpha." + std::to_string(i + 1) + " abs_log negative at corner");
  }
  (void)rigor::eval_at(p.lambda_log_upper, corner);
  return p;
}

std::string serialize(const LinearFormProblem& p) {
  std::ostringstream os;
  os << "schema_version = 1\n\n[form]\n";
  os << "case = \"" << (p.form_case == FormCase::Real ? "real" : "imaginary") << "\"\n";
  os << "D = " << p.D << "\ncD = " << p.cD << "\n";
  if (p.w_bound > 0) os << "w = " << p.w_bound << "\n";
  if (p.d1 != 1) os << "d1 = " << p.d1 << "\n";
  if (p.d2 != 1) os << "d2 = " << p.d2 << "\n";
  for (int i = 0; i < 3; ++i) {
    const auto& a = p.alphas[i];
    os << "\n[alpha." << (i + 1) << "]\n";
    os << "height = \"" << a.height_src << "\"\n";
    os << "abs_log = \"" << a.abs_log_src << "\"\n";
    os << "log_abs = \"" << a.log_abs_src << "\"\n";
    if (a.root_of_unity_order > 0) os << "nu = " << a.root_of_unity_order << "\n";
  }
  for (int i = 0; i < 3; ++i) {
    const auto& c = p.coeffs[i];
    os << "\n[coeff." << (i + 1) << "]\n";
    if (c.role == CoeffRole::Target) {
      os << "role = \"target\"\n";
    } else {
      os << "role = \"bounded\"\nbound = \"" << c.bound_src << "\"\n";
    }
    if (!c.known_positive) os << "positive = false\n";
  }
  os << "\n[lambda]\nlog_upper = \"" << p.lambda_src << "\"\n";
  for (const auto& [name, r] : p.symbols) {
    os << "\n[symbols." << name << "]\n";
    os << "min = \"" << r.lo.str(45) << "\"\n";
    if (r.bounded) os << "max = \"" << r.hi.str(45) << "\"\n";
  }
  return os.str();
}

std::vector<CertifiedFact> validate_preconditions(const LinearFormProblem& p) {
  std::vector<CertifiedFact> facts;

  // (i) |Lambda| < 2 pi / w. lambda_log_upper is checked to be decreasing in
  // P below, so its supremum sits at P = floor; certify over the scale domain.
  CertScalar w_eff;
  std::string w_src;
  if (p.w_bound > 0) {
    w_eff = CertScalar::exact(p.w_bound);
    w_src = "declared w = " + std::to_string(p.w_bound);
  } else {
    // fallback: w < 2 D^{1.6}
    w_eff = CertScalar::exact(2) *
            rigor::pow_rat(CertScalar::exact(p.D), 8, 5);
    w_src = "fallback w < 2 D^{8/5} = " + w_eff.str(8);
  }
  CertScalar threshold = rigor::log(CertScalar::exact(2) * CertScalar::pi() / w_eff);
  ExprPtr lam_at_floor =
      rigor::substitute(p.lambda_log_upper, kTargetSymbol, rigor::constant(p.p_floor()));
  CertScalar lam_sup = rigor::sup_over_domain(lam_at_floor, p.scale_symbol, p.scale_domain());
  bool small = lam_sup.certainly_lt(threshold);
  facts.push_back({"lambda_below_2pi_over_w", small,
                   "sup log|Lambda| = " + lam_sup.str(8) + " vs log(2pi/w) = " +
                       threshold.str(8) + " (" + w_src + ")"});

  // (ii) multiplicative structure declared
  facts.push_back({"mult_structure_declared", true,
                   p.mult == MultStructure::AllIndependent
                       ? "all three multiplicatively independent"
                       : "alpha." + std::to_string(p.root_slot + 1) + " is a root of unity of order " +
                             std::to_string(p.alphas[p.root_slot].root_of_unity_order)});

  // (iii) coefficient-role asymmetry explicit
  facts.push_back({"coefficient_asymmetry_explicit", true,
                   "target coefficient in slot b" + std::to_string(p.target_slot + 1) +
                       "; normal form b3|log a3| = b1|log a1| + b2|log a2| +- |Lambda|"});

  // (iv) strictly decreasing in P over the domain
  bool decreasing = false;
  std::string detail;
  try {
    rigor::LinearParts lp = rigor::linear_in(p.lambda_log_upper, kTargetSymbol);
    CertScalar slope_sup = rigor::sup_over_domain(lp.slope, p.scale_symbol, p.scale_domain());
    decreasing = slope_sup.is_negative();
    detail = "dP-slope sup = " + slope_sup.str(8);
  } catch (const Error& e) {
    detail = e.what();
  }
  facts.push_back({"lambda_strictly_decreasing_in_P", decreasing, detail});

  for (const auto& f : facts)
    if (!f.certified)
      fail(ErrorCode::PreconditionUnverifiable, f.name + ": " + f.detail);
  return facts;
}

}  // namespace lfl3::problem
