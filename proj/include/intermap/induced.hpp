#ifndef INTERMAP_INDUCED_HPP
#define INTERMAP_INDUCED_HPP

#include <functional>
#include <optional>

#include "intermap/abel.hpp"

namespace intermap {

/// f_b^{-n}(z) and its derivative in z, for real or complex n.
struct BranchPoint {
  cplx point;
  cplx deriv;
  cplx index;
};

/// Decay envelope |Q(z,d,n)| <= Qbar |z|^beta |d|^gamma |n|^delta.
struct Decay {
  double Qbar = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  /// (beta + (1+alpha) gamma) / alpha; summable when > 1 + delta.
  double beta_bar(double alpha) const { return (beta + (1.0 + alpha) * gamma) / alpha; }
};

/// A summand Q(x, d, n) of an orbit sum. When `linear_in_d` is set the
/// summand must satisfy Q(x,d,n) = d Q(x,1,n); orbit sums then multiply the
/// weight into d first, which avoids overflow of d near the fixed point.
struct Summand {
  std::function<cplx(cplx x, cplx d, cplx n)> eval;
  std::optional<Decay> decay;
  bool linear_in_d = false;
};

/// Induced map on (a,1]: f^tau(x) = A^{-1}(frac(A(f_g(x)))).
double induced_map(const AbelFunction& af, double x);
/// First return time to [a,1].
long long return_time(const AbelFunction& af, double x);

/// Backward branch f_b^{-n}(z) = A^{-1}(A(z)+n). Integer steps outside the
/// series region use direct inversion; fractional or complex remainders go
/// through the series.
BranchPoint branch_point(const AbelFunction& af, cplx z, cplx n);
/// Q evaluated at the n-th backward branch point of z.
cplx summand_r(const Summand& q, const AbelFunction& af, cplx n, cplx z);

/// Width of the band around integers in which tau falls back to iteration.
inline constexpr double kTauGuard = 1e-9;

} // namespace intermap

#endif
