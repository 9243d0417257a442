#include "intermap/induced.hpp"

#include <cmath>

namespace intermap {

namespace {

// Return time and landing point by iterating the map.
std::pair<long long, double> iterate_to_return(const PMMap& map, double x, long long cap) {
  double y = map.eval_fg(x);
  long long t = 1;
  while (y < map.a()) {
    if (++t > cap) throw ConvergenceError("return time: iteration cap exceeded");
    y = map.eval_fb(y).real();
  }
  return {t, y};
}

bool near_integer(double y) { return std::abs(y - std::round(y)) < kTauGuard * std::max(1.0, std::abs(y)); }

} // namespace

double induced_map(const AbelFunction& af, double x) {
  const PMMap& map = af.map();
  if (!(x > map.a() && x <= 1.0)) throw DomainError("induced_map: x must lie in (a,1]");
  const double g = map.eval_fg(x);
  if (g >= map.a()) return g;
  const double y = af.eval(g);
  if (near_integer(y)) return iterate_to_return(map, x, static_cast<long long>(y) + 10).second;
  return af.eval_inverse(y - std::floor(y));
}

long long return_time(const AbelFunction& af, double x) {
  const PMMap& map = af.map();
  if (!(x >= map.a() && x <= 1.0)) throw DomainError("return_time: x must lie in [a,1]");
  if (x == map.a()) return 1;
  const double g = map.eval_fg(x);
  if (g >= map.a()) return 1;
  const double y = af.eval(g);
  if (near_integer(y)) return iterate_to_return(map, x, static_cast<long long>(y) + 10).first;
  return static_cast<long long>(std::floor(y)) + 1;
}

BranchPoint branch_point(const AbelFunction& af, cplx z, cplx n) {
  if (n.real() < 0.0) throw DomainError("branch_point: Re n must be non-negative");
  const PMMap& map = af.map();
  cplx y = z;
  cplx d{1.0};
  cplx m = n;
  const bool real_z = z.imag() == 0.0;
  while (m.real() >= 1.0 && real_z && !af.in_series_region(y)) {
    y = map.eval_fb_inverse(std::min(y.real(), 1.0));
    d /= map.eval_fb_prime(y);
    m -= 1.0;
  }
  if (m == cplx{0.0}) return {y, d, n};
  cplx p;
  if (af.in_series_region(y)) {
    p = af.eval_inverse_series(af.eval_series(y) + m);
    d *= af.eval_prime_series(y) / af.eval_prime_series(p);
  } else {
    const cplx ay = af.eval(y);
    p = af.eval_inverse(ay + m);
    d *= af.eval_prime(y) / af.eval_prime(p);
  }
  return {p, d, n};
}

cplx summand_r(const Summand& q, const AbelFunction& af, cplx n, cplx z) {
  const BranchPoint bp = branch_point(af, z, n);
  return q.eval(bp.point, bp.deriv, n);
}

} // namespace intermap
