#pragma once

#include "lfl3/problem.hpp"

namespace lfl3::matveev {

using problem::LinearFormProblem;
using rigor::CertScalar;
using rigor::ExprPtr;

struct MatveevInput {
  int D = 0;
  int chi_real = 1;  // [R(alphas) : R]
  std::array<ExprPtr, 3> A;  // A_j >= max{D h(a_j), |log a_j|}, certified
  ExprPtr B_bound;           // >= max_j |b_j| A_j / A_max, expression in P (and Y)
  int max_slot = 0;          // slot whose A plays Matveev's A_1 role
};

// C1 = (5*16^5/(6 chi)) e^3 (7+2chi) (3e/2)^chi (26.25 + log(D^2 log(eD)))
CertScalar c1_constant(int D, int chi_real);

MatveevInput build_input(const LinearFormProblem& p);

// Certified lower bound for log|Lambda| as an expression in P (and the scale
// symbol): -C1 D^2 A1 A2 A3 log(1.5 e D B log(eD)).
ExprPtr matveev_log_lambda_lb(const MatveevInput& in, const LinearFormProblem& p);

// Certified upper bound for the largest solution of x = a + b (log x)^h:
//   (c log c + (log c/(log c - 1)) (a^{1/h} + c log log c))^h, c = h b^{1/h}.
// Requires a >= 0, h >= 1, b > (1/h)^h and log c > 1 + 1e-9.
CertScalar solve_pw(const CertScalar& a, const CertScalar& b, const CertScalar& h);

// Step 2: combine the Matveev lower bound with the problem's lambda upper
// bound, normalize by the P-slope, and solve for P.
CertScalar step2_bound(const LinearFormProblem& p);

}  // namespace lfl3::matveev
