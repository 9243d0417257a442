#ifndef INTERMAP_CHEBYSHEV_HPP
#define INTERMAP_CHEBYSHEV_HPP

#include <cstddef>
#include <vector>

#include "intermap/types.hpp"

namespace intermap {

/// Shifted Chebyshev polynomials T_0..T_N on [p,q] with the N+1 first-kind
/// nodes.
class ChebBasis {
public:
  ChebBasis(double p, double q, std::size_t N);

  double p() const { return p_; }
  double q() const { return q_; }
  std::size_t N() const { return N_; }
  std::size_t size() const { return N_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }

  cplx to_unit(cplx x) const { return (2.0 * x - (p_ + q_)) / (q_ - p_); }
  double to_unit(double x) const { return (2.0 * x - (p_ + q_)) / (q_ - p_); }

  /// Node values -> coefficients (DCT-II pair of coeffs_to_values).
  std::vector<double> values_to_coeffs(const std::vector<double>& values) const;
  std::vector<double> coeffs_to_values(const std::vector<double>& coeffs) const;

  /// Clenshaw evaluation of sum c_k T_k(x).
  double eval(const std::vector<double>& c, double x) const;
  cplx eval(const std::vector<double>& c, cplx x) const;
  /// T_0(x)..T_N(x) by the three-term recurrence, written into `out`.
  void eval_all(cplx x, std::vector<cplx>& out) const;

  /// Exact integral of T_k over [p,q].
  double integral(std::size_t k) const;
  double integrate(const std::vector<double>& c) const;

private:
  double p_, q_;
  std::size_t N_;
  std::vector<double> nodes_;
  std::vector<double> cos_table_;  // cos(k theta_j), row j
};

struct ChebSolution {
  ChebBasis basis;
  std::vector<double> coeffs;

  double operator()(double x) const { return basis.eval(coeffs, x); }
  cplx operator()(cplx x) const { return basis.eval(coeffs, x); }
  double integral() const { return basis.integrate(coeffs); }
  /// True when every |c_k| in the top quarter is below 1e-10 max |c_k|.
  bool coefficients_decayed() const;
};

} // namespace intermap

#endif
