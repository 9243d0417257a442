#ifndef INTERMAP_ORBIT_SUM_HPP
#define INTERMAP_ORBIT_SUM_HPP

#include <cstddef>
#include <vector>

#include "intermap/bounds.hpp"
#include "intermap/induced.hpp"

namespace intermap {

enum class DerivMode { cauchy_contour, finite_difference };

struct EMParams {
  double rho = 4.0;
  /// Number of Bernoulli correction terms; negative selects round(pi rho - 1/2).
  int K = -1;
  /// Nodes on the derivative contour.
  std::size_t quad_points = 64;
  /// Nodes of the tanh-sinh rule for the tail integral.
  std::size_t tail_points = 128;
  DerivMode deriv_mode = DerivMode::cauchy_contour;

  int effective_K() const;
};

/// Smallest n with Re(f_b^{-n}(z)^{-alpha}) >= 1/Z + 2 hhat1 + rho.
std::size_t n_star(const AbelFunction& af, const BoundConstants& bc, cplx z, double rho);

/// One evaluation point of an orbit sum: S[Q](z) ~ sum_i w_i Q(x_i, d_i, n_i).
/// `wd` = w d is stored separately since it stays finite when d underflows
/// deep in the tail.
struct OrbitNode {
  cplx x;
  cplx d;
  cplx n;
  cplx w;
  cplx wd;
};

/// Euler-Maclaurin rule for S[Q](z), reusable across summands: head terms,
/// the half term at n*, tail quadrature nodes and derivative contour nodes.
class OrbitRule {
public:
  OrbitRule(const AbelFunction& af, const BoundConstants& bc, cplx z, const EMParams& p);

  cplx z() const { return z_; }
  std::size_t n_star() const { return n_star_; }
  int K() const { return K_; }
  /// |x_{n*}|^alpha and |A'(z)|.
  double z_nstar() const { return z_nstar_; }
  double abs_dA_z() const { return abs_dA_z_; }

  /// Nodes with weights for the current K (contour nodes carry the Bernoulli
  /// correction weights).
  const std::vector<OrbitNode>& nodes() const { return nodes_; }
  cplx apply(const Summand& q) const;
  /// Same sum with a different number of correction terms.
  cplx apply(const Summand& q, int K) const;

private:
  cplx z_;
  std::size_t n_star_ = 0;
  int K_ = 0;
  double z_nstar_ = 0.0;
  double abs_dA_z_ = 0.0;
  double r_c_ = 1.0;
  std::size_t contour_begin_ = 0;
  std::vector<double> theta_;
  bool fd_mode_ = false;
  std::vector<OrbitNode> nodes_;

  std::vector<cplx> correction_weights(int K) const;
};

struct EMResult {
  cplx value;
  double err_estimate;
  std::size_t n_star;
};

EMResult euler_maclaurin_sum(const Summand& q, const AbelFunction& af, const BoundConstants& bc, cplx z,
                             const EMParams& p = {});

/// d^order/dn^order of n -> r[Q](n; z) at n0.
cplx derivative_in_n(const Summand& q, const AbelFunction& af, double n0, cplx z, int order,
                     const EMParams& p = {});

/// -int_0^{f_b^{-n*}(z)} A'(zeta) Q(zeta, A'(z)/A'(zeta), A(zeta) - A(z)) dzeta by
/// tanh-sinh, doubling from quad_points up to three times.
cplx tail_integral(const Summand& q, const AbelFunction& af, cplx z, std::size_t n_star,
                   std::size_t quad_points = 64);

} // namespace intermap

#endif
