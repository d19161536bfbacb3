#include "lfl3/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace lfl3::oracle {

long theta_bruteforce(long K0, long I) {
  if (K0 < 0 || I < 0) fail(ErrorCode::DomainError, "theta needs K0, I >= 0");
  if (I > 10000) fail(ErrorCode::ScaleExceeded, "theta brute force capped at I = 10^4");
  long taken = 0, total = 0;
  for (long n = 0; taken < I; ++n) {
    long layer = n <= K0 ? n + 1 : K0 + 1;  // card(D_n)
    long use = std::min(layer, I - taken);
    total += n * use;
    taken += use;
  }
  return total;
}

CertScalar theta_lower_bound(long K0, long I) {
  if (I < K0 * (K0 + 1) / 2)
    fail(ErrorCode::HypothesisFailed, "theta lower bound needs I >= K0(K0+1)/2");
  // (12 I^2 + 12 I (K0-1)(K0+1) - K0(K0+2)(K0+1)^2) / (24 (K0+1))
  CertScalar i = CertScalar::exact(I), k = CertScalar::exact(K0);
  CertScalar num = CertScalar::exact(12) * i * i +
                   CertScalar::exact(12) * i * (k - CertScalar::exact(1)) * (k + CertScalar::exact(1)) -
                   k * (k + CertScalar::exact(2)) * (k + CertScalar::exact(1)) * (k + CertScalar::exact(1));
  return num / (CertScalar::exact(24) * (k + CertScalar::exact(1)));
}

bool lemma33_check(long K, long L) {
  if (K < 3 || K > 8 || L < 5 || L > 12)
    fail(ErrorCode::ScaleExceeded, "lemma33_check test scale is K in [3,8], L in [5,12]");
  const long N = K * (K + 1) * L / 2;
  // RHS * 6 K^2 L^2 = N^2 (3KL^2 + 6KL - 18L - K)
  const __int128 rhs = (__int128)N * N * (3 * K * L * L + 6 * K * L - 18 * L - K);
  for (long I = 0; I <= N; ++I) {
    __int128 lhs = ((__int128)K * L * (N - I) + theta_bruteforce(K - 1, I)) * 6 * K * K * L * L;
    if (lhs < rhs) return false;
  }
  return true;
}

bool factorial_bound_check(long K) {
  if (K < 2 || K > 500) fail(ErrorCode::ScaleExceeded, "factorial bound check capped at K = 500");
  // sum_{k=1}^{K-1} (K-k) log(k!), accumulating log(k!) as a prefix sum
  CertScalar sum = CertScalar::exact(0);
  CertScalar lf = CertScalar::exact(0);
  for (long k = 1; k <= K - 1; ++k) {
    lf = lf + rigor::log(CertScalar::exact(k));
    sum = sum + CertScalar::exact(K - k) * lf;
  }
  CertScalar lhs = CertScalar::exact(12) * sum /
                   (CertScalar::exact(K) * CertScalar::exact(K - 1) * CertScalar::exact(K + 1));
  CertScalar rhs = CertScalar::exact(2) * rigor::log(CertScalar::exact(K)) -
                   CertScalar::exact(11) / CertScalar::exact(3);
  return rhs.certainly_le(lhs);
}

long plane_count_bruteforce(long A, long B, long C, long D, long X, long Y, long Z) {
  if (X < 0 || Y < 0 || Z < 0 || X > 60 || Y > 60 || Z > 60)
    fail(ErrorCode::ScaleExceeded, "plane count box sides capped at 60");
  long M = 0;
  for (long x = 0; x <= X; ++x)
    for (long y = 0; y <= Y; ++y)
      for (long z = 0; z <= Z; ++z)
        if (A * x + B * y + C * z == D) ++M;
  return M;
}

bool plane_bounds_3var_ok(long A, long B, long C, long D, long X, long Y, long Z) {
  if (A == 0 || B == 0 || C == 0) fail(ErrorCode::DomainError, "needs ABC != 0");
  if (std::gcd(std::gcd(std::abs(A), std::abs(B)), std::abs(C)) != 1)
    fail(ErrorCode::DomainError, "needs gcd(A,B,C) = 1");
  const long M = plane_count_bruteforce(A, B, C, D, X, Y, Z);
  const long alpha = std::gcd(std::abs(B), std::abs(C));
  // part (a)
  if (M > (1 + X / alpha) * (1 + Y / (std::abs(C) / alpha))) return false;
  if (M > (1 + X / alpha) * (1 + Z / (std::abs(B) / alpha))) return false;
  // part (b)
  if (M >= std::max({X + Y + 1, Y + Z + 1, Z + X + 1})) {
    // |A| <= (Y+1)(Z+1)/(M - max{Y,Z}) and cyclic counterparts
    if (std::abs(A) * (M - std::max(Y, Z)) > (Y + 1) * (Z + 1)) return false;
    if (std::abs(B) * (M - std::max(X, Z)) > (X + 1) * (Z + 1)) return false;
    if (std::abs(C) * (M - std::max(X, Y)) > (X + 1) * (Y + 1)) return false;
  }
  return true;
}

bool plane_bounds_2var_ok(long B, long C, long D, long X, long Y, long Z) {
  if (B == 0 || C == 0) fail(ErrorCode::DomainError, "needs BC != 0");
  if (std::gcd(std::abs(B), std::abs(C)) != 1) fail(ErrorCode::DomainError, "needs gcd(B,C) = 1");
  const long M = plane_count_bruteforce(0, B, C, D, X, Y, Z);
  if (M > (X + 1) * (1 + Y / std::abs(C))) return false;
  if (M > (X + 1) * (1 + Z / std::abs(B))) return false;
  if (M >= std::max(X + Y + 1, X + Z + 1)) {
    if (std::abs(B) * (M - X) > (X + 1) * (Z + 1)) return false;
    if (std::abs(C) * (M - X) > (X + 1) * (Y + 1)) return false;
  }
  return true;
}

namespace {
// values of lam(r + t b1/b3) + mu(s + t b2/b3), scaled by ld*md*b3 to integers
std::unordered_set<long long> projected_values(long b1, long b2, long b3, long R1, long S1,
                                               long T1, long ln, long ld, long mn, long md,
                                               long long* max_mult) {
  if (R1 > 60 || S1 > 60 || T1 > 60 || R1 < 0 || S1 < 0 || T1 < 0)
    fail(ErrorCode::ScaleExceeded, "projected box sides capped at 60");
  if (b3 == 0 || ld == 0 || md == 0) fail(ErrorCode::DomainError, "zero denominator");
  std::unordered_set<long long> vals;
  std::unordered_map<long long, long long> mult;
  for (long r = 0; r <= R1; ++r)
    for (long s = 0; s <= S1; ++s)
      for (long t = 0; t <= T1; ++t) {
        long long v = (long long)ln * md * (r * b3 + t * b1) + (long long)mn * ld * (s * b3 + t * b2);
        vals.insert(v);
        if (max_mult) ++mult[v];
      }
  if (max_mult) {
    long long best = 0;
    for (auto& [k, c] : mult) best = std::max(best, c);
    *max_mult = best;
  }
  return vals;
}
}  // namespace

long projected_value_count(long b1, long b2, long b3, long R1, long S1, long T1, long ln, long ld,
                           long mn, long md) {
  return (long)projected_values(b1, b2, b3, R1, S1, T1, ln, ld, mn, md, nullptr).size();
}

long projected_max_multiplicity(long b1, long b2, long b3, long R1, long S1, long T1, long ln,
                                long ld, long mn, long md) {
  long long m = 0;
  projected_values(b1, b2, b3, R1, S1, T1, ln, ld, mn, md, &m);
  return (long)m;
}

}  // namespace lfl3::oracle
