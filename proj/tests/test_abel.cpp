#include "doctest.h"

#include <cmath>

#include "intermap/abel.hpp"

using namespace intermap;

TEST_CASE("coefficients for the quadratic map") {
  // Hand-matched: 1/T = 1/z + 2 - 4z + ..., A = 1/(2z) - log z + z - 4/3 z^2 + ...
  auto e = compute_coefficients(lsv(1.0), 6, 32);
  CHECK(e.hhat1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.hhat2 == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(e.a_minus1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e.a_log == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(e.a_n[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e.a_n[1] == doctest::Approx(-4.0 / 3).epsilon(1e-13));
}

TEST_CASE("coefficients at alpha 0.95") {
  // Independent high-precision recurrence.
  auto e = compute_coefficients(lsv(0.95), 24, 32);
  CHECK(e.hhat1 == doctest::Approx(1.8352790249572066).epsilon(1e-14));
  CHECK(e.a_n[0] == doctest::Approx(0.9583105158017546).epsilon(1e-12));
  CHECK(e.a_n[1] == doctest::Approx(-1.1981800972567573).epsilon(1e-12));
  CHECK(e.a_n[2] == doctest::Approx(2.4385434183682104).epsilon(1e-11));
  CHECK(e.a_n[3] == doctest::Approx(-5.986262484408974).epsilon(1e-11));
  auto r = abel_residual_series(lsv(0.95), e, 24, 32);
  for (std::size_t k = 0; k <= 25; ++k) CHECK(std::abs(r[k]) < 1e-7 * std::pow(5.0, double(k)));
}

TEST_CASE("residual shrinks inside the radius") {
  const PMMap m = lsv(0.8);
  auto af = make_abel_function(m);
  const auto& e = af.expansion();
  CHECK(e.z_radius > 0.01);
  auto res = [&](double z) {
    const double x = std::pow(z, 1 / 0.8);
    const double tz = std::pow(m.eval_fb_inverse(x), 0.8);
    return std::abs(e.eval_z(tz) - e.eval_z(z) - 1.0);
  };
  const double r = 4 * e.z_radius;
  CHECK(res(r / 2) < 1e-3 * res(r));
}

TEST_CASE("normalisation and functional equation") {
  for (double alpha : {0.3, 0.8, 0.95, 1.5}) {
    auto af = make_abel_function(lsv(alpha));
    CHECK(std::abs(af.eval(1.0)) < 1e-12);
    CHECK(std::abs(af.eval(0.5) - 1.0) < 1e-12);
    for (double x : {1e-8, 1e-3, 0.1, 0.3, 0.49}) {
      const double fx = af.map().eval_fb(x).real();
      CHECK(std::abs(af.eval(fx) - af.eval(x) + 1.0) < 1e-11 + 1e-15 * af.eval(x));
    }
    auto deeper = normalize_constant(af, af.normalization_steps());
    CHECK(std::abs(deeper.expansion().a0 - af.expansion().a0) < 1e-12);
  }
}

TEST_CASE("derivative and inverse") {
  auto af = make_abel_function(lsv(0.8));
  for (double x : {1e-6, 0.05, 0.4, 0.7, 0.95}) {
    const double h = 1e-6 * x;
    const double fd = (af.eval(x + h) - af.eval(x - h)) / (2 * h);
    CHECK(af.eval_prime(x) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(std::abs(af.eval_inverse(0.0) - 1.0) < 1e-14);
  CHECK(std::abs(af.eval_inverse(1.0) - 0.5) < 1e-14);
  for (double y : {0.3, 2.7, 17.2, 300.5, 1e5}) {
    const double x = af.eval_inverse(y);
    CHECK(std::abs(af.eval(x) - y) < 1e-12 * (1 + y));
  }
  const cplx yc{1e3, 25.0};
  CHECK(std::abs(af.eval(af.eval_inverse(yc)) - yc) < 1e-9);
  CHECK_THROWS_AS(af.eval_inverse(cplx{2.0, 1.0}), DomainError);
  CHECK(af.eval(0.3) > af.eval(0.4));
}
