#include "doctest.h"

#include "intermap/series.hpp"

using namespace intermap;

namespace {
TruncatedSeries ser(std::initializer_list<cplx> c, std::size_t order) { return TruncatedSeries(c, order); }
}

TEST_CASE("mul") {
  auto p = mul(ser({1, 1}, 4), ser({1, -1}, 4));
  CHECK(std::abs(p[0] - 1.0) < 1e-15);
  CHECK(std::abs(p[1]) < 1e-15);
  CHECK(std::abs(p[2] + 1.0) < 1e-15);
  auto z = TruncatedSeries::identity(4);
  auto z2 = mul(z, z);
  CHECK(std::abs(z2[2] - 1.0) < 1e-15);
  CHECK(std::abs(z2[1]) == 0.0);
  auto s = ser({1, 2, 3}, 4);
  auto one = mul(TruncatedSeries::constant(1.0, 4), s);
  for (std::size_t k = 0; k <= 4; ++k) CHECK(std::abs(one[k] - s[k]) < 1e-15);
}

TEST_CASE("reciprocal") {
  auto r = reciprocal(ser({1, -1}, 6));
  for (std::size_t k = 0; k <= 6; ++k) CHECK(std::abs(r[k] - 1.0) < 1e-14);
  auto lsv = reciprocal(ser({1, -2, 8}, 2));
  CHECK(std::abs(lsv[1] - 2.0) < 1e-14);
  CHECK(std::abs(lsv[2] + 4.0) < 1e-14);
  CHECK_THROWS(reciprocal(ser({0, 1}, 3)));
}

TEST_CASE("log1 and exp0") {
  auto l = log1(ser({1, 1}, 5));
  CHECK(std::abs(l[1] - 1.0) < 1e-15);
  CHECK(std::abs(l[2] + 0.5) < 1e-15);
  CHECK(std::abs(l[3] - 1.0 / 3) < 1e-15);
  auto l2 = log1(ser({1, -2}, 4));
  CHECK(std::abs(l2[1] + 2.0) < 1e-15);
  CHECK(std::abs(l2[2] + 2.0) < 1e-15);
  CHECK(std::abs(log1(TruncatedSeries::constant(1.0, 3))[0]) == 0.0);
  auto e = exp0(l);
  CHECK(std::abs(e[0] - 1.0) < 1e-15);
  CHECK(std::abs(e[1] - 1.0) < 1e-15);
  CHECK(std::abs(e[3]) < 1e-14);
}

TEST_CASE("compose and invert") {
  auto t = invert_series(ser({0, 1, 2}, 5));
  CHECK(std::abs(t[1] - 1.0) < 1e-14);
  CHECK(std::abs(t[2] + 2.0) < 1e-14);
  CHECK(std::abs(t[3] - 8.0) < 1e-13);
  CHECK(std::abs(t[4] + 40.0) < 1e-12);
  CHECK(std::abs(t[5] - 224.0) < 1e-11);
  auto back = compose(ser({0, 1, 2}, 5), t);
  CHECK(std::abs(back[1] - 1.0) < 1e-13);
  for (std::size_t k = 2; k <= 5; ++k) CHECK(std::abs(back[k]) < 1e-11);
  auto id = invert_series(TruncatedSeries::identity(4));
  CHECK(std::abs(id[1] - 1.0) < 1e-15);
  CHECK(std::abs(id[2]) < 1e-15);
}

TEST_CASE("log-laurent compose") {
  const double h1 = 1.3, h2 = 0.4;
  LogLaurentSeries inv;
  inv.pole = 1.0;
  inv.series = TruncatedSeries(6);
  auto c = compose(inv, ser({0, 1, -h1, h2}, 8));
  CHECK(std::abs(c.pole - 1.0) < 1e-15);
  CHECK(std::abs(c.series[0] - h1) < 1e-14);
  CHECK(std::abs(c.series[1] - (h1 * h1 - h2)) < 1e-14);

  LogLaurentSeries lg;
  lg.logc = 1.0;
  lg.series = TruncatedSeries(6);
  auto c2 = compose(lg, TruncatedSeries::identity(8));
  CHECK(std::abs(c2.logc - 1.0) < 1e-15);
  for (std::size_t k = 0; k <= c2.order(); ++k) CHECK(std::abs(c2.series[k]) < 1e-15);

  LogLaurentSeries lin;
  lin.series = ser({0, 1}, 8);
  auto t = ser({0, 1, -2, 8, -40}, 8);
  auto c3 = compose(lin, t);
  for (std::size_t k = 0; k <= 4; ++k) CHECK(std::abs(c3.series[k] - t[k]) < 1e-13);
}

TEST_CASE("eval and radius") {
  auto g = ser({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 15);
  CHECK(std::abs(g.eval(0.5) - (1 - std::pow(0.5, 16)) / 0.5) < 1e-14);
  CHECK(std::abs(g.radius_estimate() - 1.0) < 1e-12);
}
