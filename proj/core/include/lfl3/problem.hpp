#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lfl3/expr.hpp"

namespace lfl3::problem {

using rigor::CertScalar;
using rigor::Domain;
using rigor::ExprPtr;

// Conventional symbol names: "P" is the target coefficient being bounded;
// exactly one further symbol (usually "Y") scales the problem data.
inline constexpr const char* kTargetSymbol = "P";

struct AlgebraicNumberSpec {
  ExprPtr height;    // absolute logarithmic Weil height upper bound
  ExprPtr abs_log;   // |log alpha| for the chosen determination
  ExprPtr log_abs;   // log|alpha| (0 in the imaginary case)
  int root_of_unity_order = 0;  // nu, 0 when not declared a root of unity
  std::string height_src, abs_log_src, log_abs_src;
};

enum class CoeffRole { Target, Bounded };

struct CoefficientSpec {
  CoeffRole role = CoeffRole::Bounded;
  ExprPtr upper_bound;  // expression in P (for the target, identically P)
  bool known_positive = true;
  std::string bound_src;
};

enum class FormCase { Real, Imaginary };
enum class MultStructure { AllIndependent, OneRootOfUnity };

struct LinearFormProblem {
  FormCase form_case = FormCase::Real;
  int D = 0;         // field degree
  int cD = 0;        // script-D = D / [R(alphas) : R]
  int w_bound = 0;   // max root-of-unity order in the field; 0 = absent
  long d1 = 1, d2 = 1;  // gcd(b1,b3), gcd(b2,b3) lower bounds
  std::array<AlgebraicNumberSpec, 3> alphas;
  std::array<CoefficientSpec, 3> coeffs;
  int target_slot = -1;  // 0-based index of the target coefficient
  ExprPtr lambda_log_upper;
  std::string lambda_src;
  MultStructure mult = MultStructure::AllIndependent;
  int root_slot = -1;  // 0-based, when mult == OneRootOfUnity
  Domain symbols;      // includes P and the scale symbol
  std::string scale_symbol;  // the unique non-P symbol

  const CertScalar& p_floor() const { return symbols.at(kTargetSymbol).lo; }
  const CertScalar& scale_min() const { return symbols.at(scale_symbol).lo; }
  // Domain of the scale symbol alone (P handled separately by callers).
  Domain scale_domain() const { return {{scale_symbol, symbols.at(scale_symbol)}}; }
};

LinearFormProblem load_problem(const std::string& config_text);
std::string serialize(const LinearFormProblem& p);

struct CertifiedFact {
  std::string name;
  bool certified = false;
  std::string detail;
};

// Certifies |Lambda| < 2pi/w (using w or the 2 D^1.6 fallback), that the
// multiplicative structure is declared, that the coefficient-role asymmetry
// is explicit, and that lambda_log_upper strictly decreases in P.
// Throws PreconditionUnverifiable if any mandatory fact fails.
std::vector<CertifiedFact> validate_preconditions(const LinearFormProblem& p);

}  // namespace lfl3::problem
