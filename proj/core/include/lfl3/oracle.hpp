#pragma once

#include <cstdint>
#include <vector>

#include "lfl3/interval.hpp"

namespace lfl3::oracle {

using rigor::CertScalar;

// Exact minimum of sum ||(k_i, m_i)|| over I pairwise-distinct pairs in N^2
// with m_i <= K0, by filling the weight layers D_0, D_1, ... in order.
// Test-scale guard: I <= 10^4.
long theta_bruteforce(long K0, long I);

// Closed-form lower bound (I^2/(2(K0+1)))(1 + (K0-1)(K0+1)/I
//   - K0(K0+2)(K0+1)^2/(12 I^2)), exact rational, valid for
// I >= K0(K0+1)/2 (HypothesisFailed otherwise).
CertScalar theta_lower_bound(long K0, long I);

// For all 0 <= I <= N = K(K+1)L/2:
//   K L (N - I) + theta(K-1, I) >= (N^2/2K)(1 + 2/L - 6/(KL) - 1/(3L^2)).
// Exact integer arithmetic; test scale 3 <= K <= 8, 5 <= L <= 12.
bool lemma33_check(long K, long L);

// (12/(K(K-1)(K+1))) sum_{k=1}^{K-1} (K-k) log(k!) >= 2 log K - 11/3,
// certified with directed rounding; 2 <= K <= 500.
bool factorial_bound_check(long K);

// Exact count of lattice points (x, y, z) in [0,X]x[0,Y]x[0,Z] with
// Ax + By + Cz = D. Box sides <= 60 (ScaleExceeded otherwise).
long plane_count_bruteforce(long A, long B, long C, long D, long X, long Y, long Z);

// Lattice-plane counting bounds for the 3-variable equation (gcd(A,B,C)=1,
// ABC != 0): part (a) box bounds with alpha = gcd(B,C); part (b) coefficient
// caps when M >= max{X+Y+1, Y+Z+1, Z+X+1}. Returns false when some stated
// inequality fails on this instance.
bool plane_bounds_3var_ok(long A, long B, long C, long D, long X, long Y, long Z);

// Same for the 2-variable equation By + Cz = D with x free in [0, X]
// (gcd(B,C)=1, BC != 0); part (b) applies when M >= max{X+Y+1, X+Z+1}.
bool plane_bounds_2var_ok(long B, long C, long D, long X, long Y, long Z);

// Distinct values of lam*(r + t b1/b3) + mu*(s + t b2/b3) over the box
// [0,R1]x[0,S1]x[0,T1], for rational lam = ln/ld, mu = mn/md. Exact.
long projected_value_count(long b1, long b2, long b3, long R1, long S1, long T1,
                           long ln, long ld, long mn, long md);

// Largest multiplicity max_c #{(r,s,t) : lam x1 + mu x2 = c} over the box.
long projected_max_multiplicity(long b1, long b2, long b3, long R1, long S1, long T1,
                                long ln, long ld, long mn, long md);

}  // namespace lfl3::oracle
