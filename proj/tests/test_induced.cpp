#include "doctest.h"

#include <cmath>
#include <random>

#include "intermap/induced.hpp"

using namespace intermap;

namespace {
std::pair<long long, double> iterate(const PMMap& m, double x) {
  double y = m.eval_f(x);
  long long t = 1;
  while (y < m.a()) {
    y = m.eval_f(y);
    ++t;
  }
  return {t, y};
}
}

TEST_CASE("examples") {
  auto af = make_abel_function(lsv(0.8));
  CHECK(induced_map(af, 1.0) == 1.0);
  CHECK(induced_map(af, 0.875) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(return_time(af, 0.5) == 1);
  CHECK(return_time(af, 0.875) == 1);
  CHECK(return_time(af, 0.75) == 1);
  CHECK(return_time(af, 1.0) == 1);
}

TEST_CASE("agrees with iteration") {
  for (double alpha : {0.5, 0.8, 1.5}) {
    const PMMap m = lsv(alpha);
    auto af = make_abel_function(m);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    for (int i = 0; i < 300; ++i) {
      const double x = u(rng);
      auto [t, y] = iterate(m, x);
      if (t > 1000) continue;
      CHECK(return_time(af, x) == t);
      CHECK(std::abs(induced_map(af, x) - y) < 1e-9);
    }
  }
}

TEST_CASE("branch points") {
  auto af1 = make_abel_function(lsv(1.0));
  CHECK(std::abs(branch_point(af1, 1.0, 1.0).point - 0.5) < 1e-15);
  auto b0 = branch_point(af1, 0.7, 0.0);
  CHECK(b0.point == cplx{0.7});
  CHECK(b0.deriv == cplx{1.0});

  const PMMap m = lsv(0.8);
  auto af = make_abel_function(m);
  for (double z : {0.55, 0.8, 1.0}) {
    double y = z;
    double d = 1.0;
    for (int n = 1; n <= 50; ++n) {
      y = m.eval_fb_inverse(y);
      d /= m.eval_fb_prime(y).real();
      auto bp = branch_point(af, z, double(n));
      CHECK(std::abs(bp.point - y) < 1e-11 * std::max(1.0, y * 1e3));
      CHECK(std::abs(bp.deriv - d) < 1e-10 * std::abs(d));
    }
    auto direct = branch_point(af, z, 37.0);
    CHECK(std::abs(direct.deriv - af.eval_prime(z) / af.eval_prime(direct.point.real())) < 1e-10 * std::abs(direct.deriv));
    auto two = branch_point(af, branch_point(af, z, 12.0).point, 25.0);
    CHECK(std::abs(two.point - direct.point) < 1e-10 * std::abs(direct.point));
  }
  auto c = branch_point(af, 0.9, cplx{200.0, 1.0});
  CHECK(std::abs(af.eval(c.point) - (af.eval(0.9) + cplx{200.0, 1.0})) < 1e-10);
}

TEST_CASE("summand evaluation") {
  auto af = make_abel_function(lsv(1.0));
  Summand d{[](cplx, cplx d, cplx) { return d; }, {}, true};
  Summand x{[](cplx x, cplx, cplx) { return x; }, {}, false};
  Summand dn{[](cplx, cplx d, cplx n) { return d * n; }, {}, true};
  CHECK(summand_r(d, af, 0.0, 0.8) == cplx{1.0});
  CHECK(std::abs(summand_r(x, af, 1.0, 1.0) - 0.5) < 1e-15);
  CHECK(summand_r(dn, af, 0.0, 0.8) == cplx{0.0});
}
