#ifndef INTERMAP_MAP_MODEL_HPP
#define INTERMAP_MAP_MODEL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "intermap/series.hpp"
#include "intermap/types.hpp"

namespace intermap {

/// One inverse branch v of the good part of the map. `eval` and `deriv` must
/// be analytic in a complex neighbourhood of [0,1]; `cell` is v([0,1]).
struct GoodBranch {
  std::function<cplx(cplx)> eval;
  std::function<cplx(cplx)> deriv;
  double cell_lo = 0.0;
  double cell_hi = 1.0;
  /// Affine inverse branches carry their parameters so the forward map and
  /// serialisation stay exact.
  std::optional<std::pair<double, double>> affine;  // (slope, intercept)

  static GoodBranch make_affine(double slope, double intercept);
  static GoodBranch make_analytic(std::function<cplx(cplx)> eval, std::function<cplx(cplx)> deriv);

  /// Forward good map on the cell: solves v(w) = x for w in [0,1].
  double forward(double x) const;
};

/// Pomeau-Manneville type map: f(x) = x h(x^alpha) on [0,a), f_g on [a,1].
class PMMap {
public:
  static constexpr std::size_t kDefaultHOrder = 32;
  static constexpr int kDefaultNewtonCap = 100;

  PMMap(double alpha, double a, std::vector<double> h_coeffs, std::vector<GoodBranch> branches,
        std::string label);

  double alpha() const { return alpha_; }
  double a() const { return a_; }
  const std::vector<double>& h_coeffs() const { return h_; }
  const std::vector<GoodBranch>& branches() const { return branches_; }
  const std::string& label() const { return label_; }
  /// Radius (in u = x^alpha) inside which the stored h series is trusted.
  double h_radius() const { return h_radius_; }

  cplx h(cplx u) const;
  cplx h_prime(cplx u) const;

  cplx eval_fb(cplx x) const;
  cplx eval_fb_prime(cplx x) const;
  /// Real inverse with bisection safeguard for x in [0,1]; returns y in [0,a].
  double eval_fb_inverse(double x, int max_iter = kDefaultNewtonCap) const;
  /// Complex inverse by plain Newton from `seed` (defaults to x).
  cplx eval_fb_inverse(cplx x, std::optional<cplx> seed = std::nullopt,
                       int max_iter = kDefaultNewtonCap) const;

  double eval_fg(double x) const;
  double eval_f(double x) const;

  /// Taylor series of T(z) = f_b^{-1}(x)^alpha in z = x^alpha.
  TruncatedSeries hat_T_series(std::size_t order, std::size_t max_order = 64) const;
  /// Series of F(z) = z h(z)^alpha, the forward conjugate of hat_T.
  TruncatedSeries hat_F_series(std::size_t order) const;

private:
  double alpha_;
  double a_;
  std::vector<double> h_;
  std::vector<GoodBranch> branches_;
  std::string label_;
  double h_radius_;
};

/// Liverani-Saussol-Vaienti map x(1 + (2x)^alpha) on [0,1/2), 2x-1 on [1/2,1].
PMMap lsv(double alpha);

/// Hypothesis diagnostics for a full-branch expanding family of inverse
/// branches on [p,q].
struct UnpReport {
  double lambda_check = 0.0;   // inf of the C-uniform expansion quantity
  double max_distortion = 0.0; // sup |v''/v'|
  double spacing = 0.0;        // partition spacing sup |O|/d(O, boundary)
  bool expansion_ok = false;   // lambda_check > 1
  std::size_t samples = 0;
};

UnpReport verify_unp(const std::vector<GoodBranch>& branches, double p, double q,
                     std::size_t sample_count);
/// Good branches of a PM map viewed as maps [0,1] -> cells of [a,1].
UnpReport verify_unp(const PMMap& map, std::size_t sample_count);

} // namespace intermap

#endif
