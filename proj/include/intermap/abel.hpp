#ifndef INTERMAP_ABEL_HPP
#define INTERMAP_ABEL_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "intermap/map_model.hpp"
#include "intermap/series.hpp"

namespace intermap {

/// Coefficients of the asymptotic expansion of the principal Abel function in
/// z = x^alpha:
///
///   A(z) ~ a_minus1 / z + a_log * log z + a0 + sum_{n=1}^N a_n z^n.
///
/// `a_log` is the coefficient of log z (not of log x).
struct AbelExpansion {
  std::string map_label;
  double alpha = 0.0;
  std::size_t N = 0;
  double a_minus1 = 0.0;
  double a_log = 0.0;
  double a0 = 0.0;
  std::vector<double> a_n;  // a_1 .. a_N
  double hhat1 = 0.0;
  double hhat2 = 0.0;
  double z_radius = 0.0;

  /// Expansion truncated after `terms` polynomial terms (default: all N).
  cplx eval_z(cplx z, std::size_t terms = static_cast<std::size_t>(-1)) const;
  /// d/dz of the expansion.
  cplx deriv_z(cplx z, std::size_t terms = static_cast<std::size_t>(-1)) const;
  /// z d/dz of the expansion, without forming 1/z^2.
  cplx z_deriv_z(cplx z) const;
  LogLaurentSeries as_series(std::size_t terms, std::size_t order) const;
};

/// Matches Taylor coefficients of A(T(z)) - A(z) - 1 at z = 0 for the
/// expansion coefficients; a0 is left at zero. `series_order` bounds the
/// working order of T's Taylor series (needs N + 3 <= series_order).
AbelExpansion compute_coefficients(const PMMap& map, std::size_t N, std::size_t series_order = 32);

/// Residual A_n(T(z)) - A_n(z) - 1 as a series (order series_order - 2).
TruncatedSeries abel_residual_series(const PMMap& map, const AbelExpansion& e, std::size_t terms,
                                     std::size_t series_order = 32);

struct AbelOptions {
  std::size_t N = 24;
  std::size_t series_order = 32;
  /// 0 selects z_radius/4.
  double switch_radius = 0.0;
  std::size_t max_backward_steps = 1000000;
  double residual_tol = 1e-13;
};

/// The principal Abel function A with A(f_b(x)) = A(x) - 1 and A(1) = 0.
/// Immutable; all evaluations are safe to call concurrently.
class AbelFunction {
public:
  AbelFunction(std::shared_ptr<const PMMap> map, AbelExpansion expansion, double switch_radius,
               std::size_t max_backward_steps);

  const PMMap& map() const { return *map_; }
  std::shared_ptr<const PMMap> map_ptr() const { return map_; }
  const AbelExpansion& expansion() const { return exp_; }
  double switch_radius() const { return switch_radius_; }
  std::size_t max_backward_steps() const { return max_steps_; }
  /// Backward steps used when fixing the constant (0 before normalisation).
  std::size_t normalization_steps() const { return norm_steps_; }
  /// Value of A on the boundary of the series region, |z| = switch_radius.
  double y_star() const { return y_star_; }

  /// True when x^alpha lies inside the region where the expansion is used.
  bool in_series_region(cplx x) const;

  cplx eval(cplx x) const;
  double eval(double x) const { return eval(cplx{x}).real(); }
  cplx eval_prime(cplx x) const;
  double eval_prime(double x) const { return eval_prime(cplx{x}).real(); }
  /// A^{-1}(y) for Re y >= 0.
  cplx eval_inverse(cplx y) const;
  double eval_inverse(double y) const;

  /// Series-region evaluation only (throws DomainError outside z_radius).
  cplx eval_series(cplx x) const;
  cplx eval_prime_series(cplx x) const;
  /// x A'(x) in the series region; finite where A'(x) alone overflows.
  cplx eval_x_prime_series(cplx x) const;
  cplx eval_inverse_series(cplx y) const;
  /// The series inverse in z = x^alpha coordinates (no branch choice for x).
  cplx eval_inverse_z(cplx y) const;

private:
  friend AbelFunction normalize_constant(const AbelFunction& af, std::size_t extra_depth);

  std::shared_ptr<const PMMap> map_;
  AbelExpansion exp_;
  double switch_radius_;
  std::size_t max_steps_;
  std::size_t norm_steps_ = 0;
  double y_star_ = 0.0;

  void refresh_y_star();
};

/// Fixes a0 so that A(1) = 0, using A(f_b^{-k}(1)) = k for a backward iterate
/// inside the switch radius. `extra_depth` pushes the iterate deeper.
AbelFunction normalize_constant(const AbelFunction& af);
AbelFunction normalize_constant(const AbelFunction& af, std::size_t extra_depth);

/// Largest radius r at which |A_N(T(z)) - A_N(z) - 1| stays below `tol` on
/// |z| = r near the positive axis.
double estimate_z_radius(const PMMap& map, const AbelExpansion& e, double tol = 1e-13);

/// Full construction: coefficients, radius estimate, switch radius, constant.
AbelFunction make_abel_function(std::shared_ptr<const PMMap> map, const AbelOptions& opts = {});
AbelFunction make_abel_function(const PMMap& map, const AbelOptions& opts = {});

} // namespace intermap

#endif
