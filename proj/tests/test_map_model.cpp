#include "doctest.h"

#include <cmath>

#include "intermap/map_model.hpp"

using namespace intermap;

TEST_CASE("forward bad branch") {
  CHECK(std::abs(lsv(1.0).eval_fb(0.25) - 0.375) < 1e-15);
  CHECK(std::abs(lsv(0.5).eval_fb(0.0)) == 0.0);
  CHECK(std::abs(lsv(0.8).eval_fb(0.3).real() - 0.3 * (1 + std::pow(0.6, 0.8))) < 1e-15);
  CHECK(std::abs(lsv(0.8).eval_fb(0.5).real() - 1.0) < 1e-15);
}

TEST_CASE("inverse bad branch") {
  const PMMap m = lsv(1.0);
  CHECK(std::abs(m.eval_fb_inverse(1.0) - 0.5) < 1e-15);
  CHECK(std::abs(m.eval_fb_inverse(0.375) - 0.25) < 1e-15);
  CHECK(m.eval_fb_inverse(0.0) == 0.0);
  CHECK(lsv(0.3).eval_fb_inverse(0.0) == 0.0);
  const PMMap m8 = lsv(0.8);
  for (double x : {1e-12, 1e-5, 0.01, 0.3, 0.77, 1.0}) {
    const double y = m8.eval_fb_inverse(x);
    CHECK(std::abs(m8.eval_fb(y).real() - x) < 1e-15 * (1 + x));
  }
  const cplx xc{0.2, 0.05};
  const cplx yc = m8.eval_fb_inverse(xc);
  CHECK(std::abs(m8.eval_fb(yc) - xc) < 1e-14);
}

TEST_CASE("conjugated inverse series") {
  const auto t = lsv(1.0).hat_T_series(5);
  CHECK(std::abs(t[1] - 1.0) < 1e-14);
  CHECK(std::abs(t[2] + 2.0) < 1e-14);
  CHECK(std::abs(t[3] - 8.0) < 1e-13);
  CHECK(std::abs(t[4] + 40.0) < 1e-12);
  const PMMap m = lsv(0.7);
  const auto t7 = m.hat_T_series(24);
  const double z = 0.01;
  const double x = std::pow(z, 1 / 0.7);
  CHECK(std::abs(t7.eval(z).real() - std::pow(m.eval_fb_inverse(x), 0.7)) < 1e-15);
}

TEST_CASE("good branch and full map") {
  const PMMap m = lsv(0.8);
  CHECK(m.eval_fg(0.875) == doctest::Approx(0.75));
  CHECK(m.eval_f(1.0) == doctest::Approx(1.0));
  CHECK(m.eval_f(0.25) == doctest::Approx(0.25 * (1 + std::pow(0.5, 0.8))));
  CHECK(m.branches().size() == 1);
  CHECK(m.branches()[0].forward(0.75) == doctest::Approx(0.5));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(PMMap(-1.0, 0.5, {1, 1}, {GoodBranch::make_affine(0.5, 0.5)}, "bad"), InvalidArgument);
  CHECK_THROWS_AS(PMMap(0.5, 0.5, {1, 0.1}, {GoodBranch::make_affine(0.5, 0.5)}, "bad"), InvalidArgument);
  CHECK_THROWS_AS(PMMap(1.0, 0.5, {1, 2}, {GoodBranch::make_affine(1.5, -0.25)}, "bad"), InvalidArgument);
}

TEST_CASE("hypothesis diagnostics") {
  auto d = verify_unp({GoodBranch::make_affine(0.5, 0.0), GoodBranch::make_affine(0.5, 0.5)}, 0.0, 1.0, 64);
  CHECK(d.expansion_ok);
  CHECK(d.max_distortion < 1e-9);
  CHECK(verify_unp(lsv(0.8), 64).expansion_ok);
  auto bad = GoodBranch::make_analytic([](cplx w) { return 0.5 + 0.5 * w; },
                                       [](cplx) { return cplx{1.2}; });
  CHECK_FALSE(verify_unp({bad}, 0.5, 1.0, 64).expansion_ok);
}
