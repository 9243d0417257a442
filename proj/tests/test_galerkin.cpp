#include "doctest.h"

#include <cmath>
#include <random>

#include "intermap/galerkin.hpp"
#include "intermap/quadrature.hpp"

using namespace intermap;

namespace {

std::vector<GoodBranch> doubling() { return {GoodBranch::make_affine(0.5, 0.0), GoodBranch::make_affine(0.5, 0.5)}; }

ChebSolution constant(const ChebBasis& b, double c) {
  std::vector<double> v(b.size(), 0.0);
  v[0] = c;
  return {b, v};
}

struct Fixture {
  std::shared_ptr<const PMMap> map = std::make_shared<const PMMap>(lsv(0.8));
  AbelFunction af = make_abel_function(map);
  BoundConstants bc = lemma_constants(*map);
};

Fixture& fix() {
  static Fixture f;
  return f;
}

} // namespace

TEST_CASE("good transfer") {
  ChebBasis b(0.0, 1.0, 6);
  CHECK(std::abs(branch_transfer(doubling(), constant(b, 1.0), 0.3) - 1.0) < 1e-15);
  ChebBasis bi(0.5, 1.0, 6);
  const PMMap m = lsv(0.8);
  CHECK(std::abs(good_transfer(m, constant(bi, 1.0), 0.2) - 0.5) < 1e-15);
  ChebSolution t1{bi, {0, 1, 0, 0, 0, 0, 0}};
  for (double x : {0.0, 0.3, 0.9}) {
    const double w = (x + 1) / 2;
    CHECK(std::abs(good_transfer(m, t1, x) - 0.5 * (4 * w - 3)) < 1e-15);
  }
}

TEST_CASE("doubling map acim") {
  auto M = build_matrix(doubling(), 0.0, 1.0, 16);
  auto rho = solve_acim(M);
  CHECK(std::abs(rho.coeffs[0] - 1.0) < 1e-12);
  for (std::size_t k = 1; k < rho.coeffs.size(); ++k) CHECK(std::abs(rho.coeffs[k]) < 1e-12);
  CHECK(std::abs(rho(0.37) - 1.0) < 1e-12);
}

TEST_CASE("induced acim at alpha 0.8") {
  auto& f = fix();
  auto M = build_matrix(f.af, f.bc, 128);
  CHECK_FALSE(M.ill_conditioned());
  auto rho = solve_acim(M);
  CHECK(std::abs(rho.integral() - 1.0) < 1e-12);
  CHECK(rho.coefficients_decayed());

  // Fixed point at the nodes.
  double res = 0.0;
  for (std::size_t j = 0; j < rho.basis.size(); j += 8) {
    const double x = rho.basis.nodes()[j];
    res = std::max(res, std::abs(induced_transfer_pointwise(f.af, f.bc, rho, x).value - rho(x)));
  }
  CHECK(res < 1e-9);

  auto rho64 = solve_acim(build_matrix(f.af, f.bc, 64));
  for (int i = 0; i < 10; ++i) {
    const double x = 0.5 + 0.5 * (i + 0.5) / 10;
    CHECK(std::abs(rho64(x) - rho(x)) < 1e-9);
  }
  for (int i = 0; i <= 1000; ++i) CHECK(rho(0.5 + 0.5 * i / 1000.0) > -1e-10);

  // Mass conservation and the column invariant through the pointwise path.
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  ChebBasis b = M.basis();
  std::vector<double> c(b.size(), 0.0);
  for (std::size_t k = 0; k < 8; ++k) c[k] = nd(rng) / (1 + k * k);
  ChebSolution phi{b, c};
  auto lphi = [&](double x) { return induced_transfer_pointwise(f.af, f.bc, phi, x).value.real(); };
  const double mass = clenshaw_curtis_adaptive(lphi, 0.5, 1.0, 1e-12, 16, 128).value;
  CHECK(std::abs(mass - phi.integral()) < 1e-9);

  for (std::size_t k : {std::size_t{0}, std::size_t{5}, std::size_t{17}}) {
    std::vector<double> e(b.size(), 0.0);
    e[k] = 1.0;
    ChebSolution tk{b, e};
    std::vector<double> vals;
    for (double x : b.nodes())
      vals.push_back(tk(x) - induced_transfer_pointwise(f.af, f.bc, tk, x).value.real() + M.u() * b.integral(k));
    const auto col = b.values_to_coeffs(vals);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::abs(col[i] - M.entries()(i, k)) < 1e-9);
  }

  // Solution operator.
  auto u = constant(b, M.u());
  auto su = solution_apply(M, u);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(std::abs(su.coeffs[k] - rho.coeffs[k]) < 1e-12);
  auto g = phi;
  auto sg = solution_apply(M, g);
  Eigen::VectorXd back = M.entries() * Eigen::Map<const Eigen::VectorXd>(sg.coeffs.data(), sg.coeffs.size());
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(std::abs(back[k] - g.coeffs[k]) < 1e-9);
  ChebSolution g2{b, c};
  for (double& v : g2.coeffs) v *= 3.0;
  auto s2 = solution_apply(M, g2);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(std::abs(s2.coeffs[k] - 3.0 * sg.coeffs[k]) < 1e-12 * (1 + std::abs(s2.coeffs[k])));
  CHECK(induced_transfer_pointwise(f.af, f.bc, constant(b, 0.0), 0.7).value == cplx{0.0});
}

TEST_CASE("spectral convergence") {
  auto& f = fix();
  auto ref = solve_acim(build_matrix(f.af, f.bc, 160));
  double prev = 1e300;
  for (std::size_t N : {8, 16, 32}) {
    auto r = solve_acim(build_matrix(f.af, f.bc, N));
    double e = 0.0;
    for (int i = 0; i <= 20; ++i) e = std::max(e, std::abs(r(0.5 + 0.025 * i) - ref(0.5 + 0.025 * i)));
    CHECK(e < prev);
    prev = e;
  }
}
