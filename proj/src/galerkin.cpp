#include "intermap/galerkin.hpp"

#include <cmath>

#include "intermap/parallel.hpp"

namespace intermap {

namespace {

cplx branch_deriv(const GoodBranch& b, cplx x) {
  const cplx dv = b.deriv(x);
  return x.imag() == 0.0 ? cplx{std::abs(dv.real())} : dv;
}

// Column values (I - L + u int) T_k at the nodes, given the rows of L T_k.
OperatorMatrix assemble(const ChebBasis& basis, const std::vector<std::vector<double>>& lt) {
  const std::size_t m = basis.size();
  const double u = 1.0 / (basis.q() - basis.p());
  Eigen::MatrixXd K(m, m);
  std::vector<std::vector<cplx>> t(m);
  for (std::size_t j = 0; j < m; ++j) basis.eval_all(basis.nodes()[j], t[j]);
  std::vector<double> col(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) col[j] = t[j][k].real() - lt[j][k] + u * basis.integral(k);
    const std::vector<double> c = basis.values_to_coeffs(col);
    for (std::size_t i = 0; i < m; ++i) K(i, k) = c[i];
  }
  return OperatorMatrix(basis, std::move(K));
}

} // namespace

cplx branch_transfer(const std::vector<GoodBranch>& branches, const ChebSolution& phi, cplx x) {
  cplx s{0.0};
  for (const GoodBranch& b : branches) s += branch_deriv(b, x) * phi(b.eval(x));
  return s;
}

cplx good_transfer(const PMMap& map, const ChebSolution& phi, cplx x) {
  return branch_transfer(map.branches(), phi, x);
}

EMResult induced_transfer_pointwise(const AbelFunction& af, const BoundConstants& bc, const ChebSolution& phi,
                                    cplx z, const EMParams& p) {
  const PMMap& map = af.map();
  double qbar = 0.0;
  for (int i = 0; i <= 64; ++i) qbar = std::max(qbar, std::abs(good_transfer(map, phi, i / 64.0)));
  Summand q{[&](cplx x, cplx d, cplx) { return d * good_transfer(map, phi, x); },
            Decay{qbar, 0.0, 1.0, 0.0}, true};
  return euler_maclaurin_sum(q, af, bc, z, p);
}

OperatorMatrix::OperatorMatrix(ChebBasis basis, Eigen::MatrixXd entries)
    : basis_(std::move(basis)), K_(std::move(entries)), lu_(K_), rcond_(lu_.rcond()) {
  if (!(rcond_ > 0.0) || !std::isfinite(rcond_)) throw ConvergenceError("OperatorMatrix: singular system");
}

std::vector<double> OperatorMatrix::solve(const std::vector<double>& rhs) const {
  if (rhs.size() != basis_.size()) throw InvalidArgument("OperatorMatrix::solve: size mismatch");
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size());
  const Eigen::VectorXd x = lu_.solve(b);
  return std::vector<double>(x.data(), x.data() + x.size());
}

OperatorMatrix build_matrix(const AbelFunction& af, const BoundConstants& bc, std::size_t N, const EMParams& p,
                            unsigned jobs) {
  if (N < 4) throw InvalidArgument("build_matrix: need N >= 4");
  const PMMap& map = af.map();
  ChebBasis basis(map.a(), 1.0, N);
  const std::size_t m = basis.size();
  std::vector<std::vector<double>> lt(m, std::vector<double>(m, 0.0));
  parallel_for(m, jobs, [&](std::size_t j) {
    const OrbitRule rule(af, bc, basis.nodes()[j], p);
    std::vector<cplx> acc(m, 0.0), tk;
    for (const OrbitNode& nd : rule.nodes()) {
      if (nd.wd == cplx{0.0}) continue;
      for (const GoodBranch& b : map.branches()) {
        const cplx wgt = nd.wd * branch_deriv(b, nd.x);
        basis.eval_all(b.eval(nd.x), tk);
        for (std::size_t k = 0; k < m; ++k) acc[k] += wgt * tk[k];
      }
    }
    for (std::size_t k = 0; k < m; ++k) lt[j][k] = acc[k].real();
  });
  return assemble(basis, lt);
}

OperatorMatrix build_matrix(const std::vector<GoodBranch>& branches, double p, double q, std::size_t N) {
  if (N < 4) throw InvalidArgument("build_matrix: need N >= 4");
  ChebBasis basis(p, q, N);
  const std::size_t m = basis.size();
  std::vector<std::vector<double>> lt(m, std::vector<double>(m, 0.0));
  std::vector<cplx> tk;
  for (std::size_t j = 0; j < m; ++j) {
    const double x = basis.nodes()[j];
    for (const GoodBranch& b : branches) {
      // Branch maps [p,q] into itself; v is defined on the unit variable of [p,q].
      const cplx w = branch_deriv(b, x);
      basis.eval_all(b.eval(x), tk);
      for (std::size_t k = 0; k < m; ++k) lt[j][k] += (w * tk[k]).real();
    }
  }
  return assemble(basis, lt);
}

ChebSolution solve_acim(const OperatorMatrix& M) {
  std::vector<double> rhs(M.basis().size(), 0.0);
  rhs[0] = M.u();
  ChebSolution s{M.basis(), M.solve(rhs)};
  const double mass = s.integral();
  for (double& c : s.coeffs) c /= mass;
  return s;
}

ChebSolution solution_apply(const OperatorMatrix& M, const ChebSolution& g) {
  if (g.coeffs.size() != M.basis().size()) throw InvalidArgument("solution_apply: basis mismatch");
  return {M.basis(), M.solve(g.coeffs)};
}

} // namespace intermap
