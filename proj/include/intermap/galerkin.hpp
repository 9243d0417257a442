#ifndef INTERMAP_GALERKIN_HPP
#define INTERMAP_GALERKIN_HPP

#include <Eigen/Dense>

#include "intermap/chebyshev.hpp"
#include "intermap/orbit_sum.hpp"

namespace intermap {

/// (L_g phi)(x) = sum over good inverse branches of v'(x) phi(v(x)).
cplx good_transfer(const PMMap& map, const ChebSolution& phi, cplx x);
/// Same for an arbitrary branch family.
cplx branch_transfer(const std::vector<GoodBranch>& branches, const ChebSolution& phi, cplx x);

/// (L_ind phi)(z) as the orbit sum of Q(x,d,n) = d (L_g phi)(x).
EMResult induced_transfer_pointwise(const AbelFunction& af, const BoundConstants& bc, const ChebSolution& phi,
                                    cplx z, const EMParams& p = {});

/// Collocation matrix of I - L + u int on the Chebyshev basis (columns are
/// coefficient vectors), with u = 1/(q-p). Factorised on construction.
class OperatorMatrix {
public:
  OperatorMatrix(ChebBasis basis, Eigen::MatrixXd entries);

  const ChebBasis& basis() const { return basis_; }
  const Eigen::MatrixXd& entries() const { return K_; }
  double u() const { return 1.0 / (basis_.q() - basis_.p()); }
  /// Reciprocal condition estimate of the factorisation.
  double rcond() const { return rcond_; }
  bool ill_conditioned() const { return rcond_ < 1e-12; }

  std::vector<double> solve(const std::vector<double>& rhs_coeffs) const;

private:
  ChebBasis basis_;
  Eigen::MatrixXd K_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_;
};

/// Induced operator on [a,1]; one orbit rule per node, shared by all columns.
OperatorMatrix build_matrix(const AbelFunction& af, const BoundConstants& bc, std::size_t N,
                            const EMParams& p = {}, unsigned jobs = 1);
/// Plain transfer operator of a full-branch family on [p,q] (no inducing).
OperatorMatrix build_matrix(const std::vector<GoodBranch>& branches, double p, double q, std::size_t N);

/// Normalised fixed point S u.
ChebSolution solve_acim(const OperatorMatrix& M);
/// S g = (I - L + u int)^{-1} g.
ChebSolution solution_apply(const OperatorMatrix& M, const ChebSolution& g);

} // namespace intermap

#endif
