#include "doctest.h"

#include <cmath>

#include "intermap/bounds.hpp"

using namespace intermap;

TEST_CASE("suprema") {
  const PMMap m = lsv(1.0);
  const double R = default_series_radius(m);
  const double G = estimate_G(m, R);
  CHECK(G >= 4.0);
  CHECK(estimate_G(m, 0.5 * R) <= G);
  CHECK(std::abs(estimate_G(m, R, 1440) - G) < 0.01 * G);
  auto bc = lemma_constants(m);
  auto bc2 = lemma_constants(m, 0.0, 1440);
  CHECK(std::abs(bc2.Gprime - bc.Gprime) < 0.01 * bc.Gprime);
}

TEST_CASE("bound constants") {
  for (double alpha : {0.25, 0.8, 1.0, 1.5}) {
    auto bc = lemma_constants(lsv(alpha));
    CHECK(bc.R1 <= bc.R);
    CHECK(bc.Z <= bc.R1);
    CHECK(bc.d2 > 1.0);
    CHECK(bc.d1 > 0.0);
    CHECK(bc.Z > 0.0);
    CHECK(bc.d3(4) > 0.0);
  }
  auto bc = lemma_constants(lsv(1.0));
  CHECK(bc.hhat1 == doctest::Approx(2.0));
  CHECK(bc.d2 == doctest::Approx(1 + 2.5 * std::exp(0.6) * (1 + 0.4 * bc.G / 4)).epsilon(1e-15));
  CHECK(bc.d1 == doctest::Approx((1 + bc.G / 4) / (bc.d2 * bc.d2)).epsilon(1e-15));
}

TEST_CASE("gimel shape") {
  // With u = beta_bar - delta - 1 the minimum sits where
  // -log(1-aleph) (C + 1/u) = 1/u^2, C = 1/(delta+1) + hhat1/R1: decreasing
  // below, increasing above.
  auto bc = lemma_constants(lsv(0.8));
  const double L = -std::log(1.0 - bc.aleph);
  for (double delta : {0.0, 1.0}) {
    const double C = 1.0 / (delta + 1.0) + bc.hhat1 / bc.R1;
    const double u_star = (-L + std::sqrt(L * L + 4 * L * C)) / (2 * L * C);
    double prev = bc.gimel(delta + 1 + 0.01 * u_star, delta);
    for (double f = 0.05; f < 1.0; f += 0.05) {
      const double v = bc.gimel(delta + 1 + f * u_star, delta);
      CHECK(v < prev);
      prev = v;
    }
    prev = bc.gimel(delta + 1 + 1.01 * u_star, delta);
    for (double f = 1.1; f < 20.0; f *= 1.2) {
      const double v = bc.gimel(delta + 1 + f * u_star, delta);
      CHECK(v > prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(bc.gimel(1.0, 0.0), InvalidArgument);
}

TEST_CASE("series error bound") {
  auto bc = lemma_constants(lsv(0.8));
  const std::size_t n = 6;
  const double r = std::min(bc.R1, bc.r_n(n));
  CHECK(abel_series_error(bc, n, 0.1 * r) < abel_series_error(bc, n, 0.5 * r));
  CHECK(abel_series_error(bc, n, 1e-6 * r) < 1e-20);
  CHECK_THROWS_AS(abel_series_error(bc, n, 2 * r), DomainError);
}

TEST_CASE("remainder bound") {
  auto bc = lemma_constants(lsv(0.8));
  Decay q{1.0, 1.0, 1.0, 0.0};
  const double rho = 4.0;
  const int kopt = static_cast<int>(std::lround(M_PI * rho - 0.5));
  double prev = em_error(bc, q, 0.8, 1.0, 10, 0.01, rho, 1);
  for (int K = 2; K <= kopt - 1; ++K) {
    const double e = em_error(bc, q, 0.8, 1.0, 10, 0.01, rho, K);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(em_error(bc, q, 0.8, 1.0, 10, 0.01, rho, kopt + 4) > em_error(bc, q, 0.8, 1.0, 10, 0.01, rho, kopt));
  for (double r : {4.0, 5.0, 6.0})
    CHECK(em_error(bc, q, 0.8, 1.0, 10, 0.01, r + 1, 12) < em_error(bc, q, 0.8, 1.0, 10, 0.01, r, 12));
  Decay neg{1.0, 0.0, -0.5, 0.0};
  const double en = em_error(bc, neg, 0.8, 1.0, 10, 0.01, rho, 12);
  CHECK(std::isfinite(en));
  CHECK(en > 0.0);
}

TEST_CASE("derivative sandwich and shift inequality on the region") {
  const auto map = std::make_shared<const PMMap>(lsv(0.5));
  const AbelFunction af = make_abel_function(map);
  const BoundConstants bc = lemma_constants(*map);
  for (cplx z : sample_region(bc.Z, 50, 3)) {
    CHECK(std::real(1.0 / z) >= 1.0 / bc.Z * (1 - 1e-12));
    const double d = abel_derivative_scaled(af, z);
    CHECK(d >= 0.5 / bc.hhat1);
    CHECK(d <= 2.0 / bc.hhat1);
  }
  const cplx m{0.6, -0.3};
  const double s = 1.0 / (1.0 / bc.Z + 2.0 * bc.hhat1 * std::abs(m));
  for (cplx z0 : sample_region(s, 50, 4)) CHECK(abel_shift_defect(af, z0, m) <= 2.0 * bc.hhat1 * std::abs(m));
}
