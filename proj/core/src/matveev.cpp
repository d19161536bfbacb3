#include "lfl3/matveev.hpp"

namespace lfl3::matveev {

using namespace rigor;
using problem::kTargetSymbol;

CertScalar c1_constant(int D, int chi_real) {
  if (D < 1) fail(ErrorCode::DomainError, "D >= 1 required");
  if (chi_real != 1 && chi_real != 2) fail(ErrorCode::DomainError, "chi_real must be 1 or 2");
  CertScalar e = rigor::exp(CertScalar::exact(1));
  CertScalar chi = CertScalar::exact(chi_real);
  CertScalar d = CertScalar::exact(D);
  CertScalar c = CertScalar::exact(5) * pow_long(CertScalar::exact(16), 5) /
                 (CertScalar::exact(6) * chi);
  c = c * pow_long(e, 3) * (CertScalar::exact(7) + CertScalar::exact(2) * chi);
  c = c * pow_rat(CertScalar::exact(3) * e / CertScalar::exact(2), chi_real, 1);
  c = c * (CertScalar::from_string("26.25") + rigor::log(d * d * rigor::log(e * d)));
  return c;
}

MatveevInput build_input(const LinearFormProblem& p) {
  MatveevInput in;
  in.D = p.D;
  in.chi_real = p.form_case == problem::FormCase::Real ? 1 : 2;
  ExprPtr dD = constant((long)p.D);
  for (int j = 0; j < 3; ++j)
    in.A[j] = rigor::max(mul(dD, p.alphas[j].height), p.alphas[j].abs_log);

  // pick the slot whose A dominates over the whole domain (Matveev's A_1)
  Domain dom = p.scale_domain();
  in.max_slot = -1;
  for (int j = 0; j < 3 && in.max_slot < 0; ++j) {
    bool dominates = true;
    for (int k = 0; k < 3; ++k) {
      if (k == j) continue;
      CertScalar diff = inf_over_domain(sub(in.A[j], in.A[k]), p.scale_symbol, dom);
      if (!diff.is_nonnegative()) { dominates = false; break; }
    }
    if (dominates) in.max_slot = j;
  }
  if (in.max_slot < 0)
    fail(ErrorCode::InvariantViolated,
         "no A_j dominates the others over the whole domain; reorder the alphas");

  ExprPtr b = nullptr;
  for (int j = 0; j < 3; ++j) {
    ExprPtr term = div(mul(p.coeffs[j].upper_bound, in.A[j]), in.A[in.max_slot]);
    b = b ? rigor::max(b, term) : term;
  }
  in.B_bound = b;
  return in;
}

ExprPtr matveev_log_lambda_lb(const MatveevInput& in, const LinearFormProblem& p) {
  CertScalar c1 = c1_constant(in.D, in.chi_real);
  CertScalar e = rigor::exp(CertScalar::exact(1));
  CertScalar d = CertScalar::exact(in.D);
  // log(1.5 e D B log(eD))
  CertScalar kappa = CertScalar::from_string("1.5") * e * d * rigor::log(e * d);
  ExprPtr logfac = rigor::log(mul(constant(kappa), in.B_bound));
  ExprPtr prod = mul(mul(in.A[0], in.A[1]), in.A[2]);
  ExprPtr mag = mul(constant(c1 * d * d), mul(prod, logfac));
  return sub(constant(0L), mag);
}

CertScalar solve_pw(const CertScalar& a, const CertScalar& b, const CertScalar& h) {
  if (!a.is_nonnegative()) fail(ErrorCode::HypothesisFailed, "solve_pw needs a >= 0");
  if (!CertScalar::exact(1).certainly_le(h)) fail(ErrorCode::HypothesisFailed, "solve_pw needs h >= 1");
  CertScalar one = CertScalar::exact(1);
  CertScalar inv_h = one / h;
  CertScalar floor_b = rigor::exp(rigor::log(inv_h) * h);  // (1/h)^h
  if (!floor_b.certainly_lt(b)) fail(ErrorCode::HypothesisFailed, "solve_pw needs b > (1/h)^h");
  CertScalar c = h * rigor::exp(rigor::log(b) * inv_h);  // h b^{1/h}
  CertScalar lc = rigor::log(c);
  if (!(one + CertScalar::from_string("1e-9")).certainly_lt(lc))
    fail(ErrorCode::HypothesisFailed, "solve_pw needs log(h b^{1/h}) > 1 (division guard)");
  CertScalar a_pow = a.contains_zero() ? CertScalar::hull(CertScalar::exact(0),
                                                          rigor::exp(rigor::log(rigor::max(
                                                                         a, CertScalar::from_string(
                                                                                "1e-300"))) *
                                                                     inv_h))
                                       : rigor::exp(rigor::log(a) * inv_h);
  CertScalar base = c * lc + lc / (lc - one) * (a_pow + c * rigor::log(lc));
  return rigor::exp(rigor::log(base) * h);
}

CertScalar step2_bound(const LinearFormProblem& p) {
  MatveevInput in = build_input(p);
  Domain dom = p.scale_domain();

  // lambda = offset(Y) + slope(Y) P, slope certified negative
  LinearParts lam = linear_in(p.lambda_log_upper, kTargetSymbol);
  CertScalar slope_sup = sup_over_domain(lam.slope, p.scale_symbol, dom);
  if (!slope_sup.is_negative())
    fail(ErrorCode::NoBoundExtractable, "lambda upper bound is not decreasing in P");
  ExprPtr neg_slope = sub(constant(0L), lam.slope);

  // B(P) <= cB * P over P >= Pfloor: with bound_j = off_j + slp_j P (affine,
  // slp >= 0), bound_j/P <= max(off_j, 0)/Pfloor + slp_j.
  ExprPtr cB_expr = nullptr;
  for (int j = 0; j < 3; ++j) {
    LinearParts bp = linear_in(p.coeffs[j].upper_bound, kTargetSymbol);
    CertScalar slp = eval_at(bp.slope, {});
    CertScalar off = eval_at(bp.offset, {});
    if (!slp.is_nonnegative())
      fail(ErrorCode::NoBoundExtractable, "coefficient bound decreasing in P");
    CertScalar coeff = rigor::max(off, CertScalar::exact(0)) / p.p_floor() + slp;
    ExprPtr term = mul(constant(coeff), div(in.A[j], in.A[in.max_slot]));
    cB_expr = cB_expr ? rigor::max(cB_expr, term) : term;
  }
  CertScalar cB_sup = sup_over_domain(cB_expr, p.scale_symbol, dom);
  if (cB_sup.hi_is_inf())
    fail(ErrorCode::NoBoundExtractable, "coefficient bound grows faster than P");
  CertScalar cB(cB_sup.prec());
  cB.set_endpoints(cB_sup.hi_raw(), cB_sup.hi_raw());

  CertScalar c1 = c1_constant(in.D, in.chi_real);
  CertScalar e = rigor::exp(CertScalar::exact(1));
  CertScalar d = CertScalar::exact(in.D);
  CertScalar kappa = CertScalar::from_string("1.5") * e * d * rigor::log(e * d) * cB;
  ExprPtr Aprod = mul(mul(in.A[0], in.A[1]), in.A[2]);
  ExprPtr C_of_y = mul(constant(c1 * d * d), Aprod);

  // P < [offset + C(Y) log(kappa)]/(-slope) + [C(Y)/(-slope)] log P
  CertScalar a_part = sup_over_domain(
      div(add(lam.offset, mul(C_of_y, constant(rigor::log(kappa)))), neg_slope), p.scale_symbol,
      dom);
  CertScalar b_part = sup_over_domain(div(C_of_y, neg_slope), p.scale_symbol, dom);
  if (a_part.hi_is_inf() || b_part.hi_is_inf())
    fail(ErrorCode::NoBoundExtractable, "Matveev/lambda combination is unbounded over the domain");
  CertScalar a_hi(a_part.prec()), b_hi(b_part.prec());
  a_hi.set_endpoints(a_part.hi_raw(), a_part.hi_raw());
  b_hi.set_endpoints(b_part.hi_raw(), b_part.hi_raw());
  if (!a_hi.is_nonnegative()) a_hi = CertScalar::exact(0);
  return solve_pw(a_hi, b_hi, CertScalar::exact(1));
}

}  // namespace lfl3::matveev
