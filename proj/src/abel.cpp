#include "intermap/abel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace intermap {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

cplx AbelExpansion::eval_z(cplx z, std::size_t terms) const {
  const std::size_t n = std::min(terms, a_n.size());
  cplx poly{0.0};
  for (std::size_t i = n; i >= 1; --i) poly = (poly + a_n[i - 1]) * z;
  return a_minus1 / z + a_log * std::log(z) + a0 + poly;
}

cplx AbelExpansion::deriv_z(cplx z, std::size_t terms) const {
  const std::size_t n = std::min(terms, a_n.size());
  cplx poly{0.0};
  for (std::size_t i = n; i >= 1; --i) poly = poly * z + static_cast<double>(i) * a_n[i - 1];
  return -a_minus1 / (z * z) + a_log / z + poly;
}

cplx AbelExpansion::z_deriv_z(cplx z) const {
  cplx poly{0.0};
  for (std::size_t i = a_n.size(); i >= 1; --i) poly = (poly + static_cast<double>(i) * a_n[i - 1]) * z;
  return -a_minus1 / z + a_log + poly;
}

LogLaurentSeries AbelExpansion::as_series(std::size_t terms, std::size_t order) const {
  LogLaurentSeries s;
  s.pole = a_minus1;
  s.logc = a_log;
  s.series = TruncatedSeries(order);
  s.series.at(0) = a0;
  for (std::size_t i = 1; i <= std::min({terms, a_n.size(), order}); ++i) s.series.at(i) = a_n[i - 1];
  return s;
}

TruncatedSeries abel_residual_series(const PMMap& map, const AbelExpansion& e, std::size_t terms,
                                     std::size_t series_order) {
  const TruncatedSeries t = map.hat_T_series(series_order);
  const LogLaurentSeries outer = e.as_series(terms, series_order);
  LogLaurentSeries d = compose(outer, t) - outer;
  // Pole and log parts cancel identically; only the Taylor part remains.
  TruncatedSeries r = d.series;
  r.at(0) -= 1.0;
  return r;
}

AbelExpansion compute_coefficients(const PMMap& map, std::size_t N, std::size_t series_order) {
  if (N < 1 || N + 3 > series_order)
    throw InvalidArgument("compute_coefficients: need 1 <= N <= series_order - 3");
  const TruncatedSeries t = map.hat_T_series(series_order);
  const std::size_t m = series_order;

  AbelExpansion e;
  e.map_label = map.label();
  e.alpha = map.alpha();
  e.N = N;
  e.hhat1 = -t[2].real();
  e.hhat2 = t[3].real();
  e.a_minus1 = 1.0 / e.hhat1;

  // a_log kills the O(z) term; log(T/z) = -hhat1 z + O(z^2).
  TruncatedSeries d = abel_residual_series(map, e, 0, series_order);
  if (std::abs(d[0]) > 1e-12) throw ConvergenceError("compute_coefficients: leading residual does not vanish");
  e.a_log = d[1].real() / e.hhat1;
  d = abel_residual_series(map, e, 0, series_order);
  if (std::abs(d[1]) > 1e-12 * std::max(1.0, std::abs(e.a_log)))
    throw ConvergenceError("compute_coefficients: log coefficient failed to cancel O(z)");

  // D_n = D_{n-1} + a_n (T^n - z^n); the z^{n+1} coefficient of T^n - z^n is -n hhat1.
  TruncatedSeries tn = TruncatedSeries::constant(1.0, m);
  for (std::size_t n = 1; n <= N; ++n) {
    tn = mul(tn, t);
    const double an = d[n + 1].real() / (static_cast<double>(n) * e.hhat1);
    e.a_n.push_back(an);
    const double before = std::abs(d[n + 1]);
    for (std::size_t k = 0; k <= d.order(); ++k) d.at(k) += an * tn[k];
    d.at(n) -= an;
    if (std::abs(d[n + 1]) > 1e-9 * std::max(1.0, before))
      throw ConvergenceError("compute_coefficients: residual failed to drop order at step " +
                             std::to_string(n));
  }
  return e;
}

double estimate_z_radius(const PMMap& map, const AbelExpansion& e, double tol) {
  double r_max = 0.5 * map.hat_T_series(32).radius_estimate();
  r_max = std::min({r_max, 0.5, 0.5 * map.h_radius()});
  const double alpha = map.alpha();
  auto passes = [&](double r) {
    for (double theta : {0.0, std::numbers::pi / 8, -std::numbers::pi / 8}) {
      const cplx z = std::polar(r, theta);
      const cplx x = std::pow(z, 1.0 / alpha);
      cplx tz;
      try {
        tz = std::pow(map.eval_fb_inverse(x, x), alpha);
      } catch (const std::exception&) {
        return false;
      }
      const cplx az = e.eval_z(z);
      const cplx res = e.eval_z(tz) - az - 1.0;
      if (!(std::abs(res) <= tol + 8 * kEps * std::abs(az))) return false;
    }
    return true;
  };
  double r = r_max;
  for (int i = 0; i < 400; ++i, r *= 0.9) {
    if (passes(r) && passes(0.9 * r) && passes(0.81 * r)) return r;
  }
  throw ConvergenceError("estimate_z_radius: residual never fell below tolerance");
}

AbelFunction::AbelFunction(std::shared_ptr<const PMMap> map, AbelExpansion expansion,
                           double switch_radius, std::size_t max_backward_steps)
    : map_(std::move(map)), exp_(std::move(expansion)), switch_radius_(switch_radius),
      max_steps_(max_backward_steps) {
  if (!map_) throw InvalidArgument("AbelFunction: null map");
  if (!(switch_radius_ > 0.0)) throw InvalidArgument("AbelFunction: switch radius must be positive");
  if (exp_.z_radius <= 0.0) exp_.z_radius = switch_radius_;
  refresh_y_star();
}

void AbelFunction::refresh_y_star() { y_star_ = exp_.eval_z(switch_radius_).real(); }

bool AbelFunction::in_series_region(cplx x) const {
  const cplx z = std::pow(x, map_->alpha());
  return std::abs(z) <= switch_radius_ && z.real() > 0.0;
}

cplx AbelFunction::eval_series(cplx x) const {
  const cplx z = std::pow(x, map_->alpha());
  if (!(std::abs(z) <= exp_.z_radius) || z.real() <= 0.0)
    throw DomainError("AbelFunction: point outside the validated series region");
  return exp_.eval_z(z);
}

cplx AbelFunction::eval_prime_series(cplx x) const {
  const double alpha = map_->alpha();
  const cplx z = std::pow(x, alpha);
  if (!(std::abs(z) <= exp_.z_radius) || z.real() <= 0.0)
    throw DomainError("AbelFunction: point outside the validated series region");
  return exp_.deriv_z(z) * alpha * z / x;
}

cplx AbelFunction::eval_x_prime_series(cplx x) const {
  const cplx z = std::pow(x, map_->alpha());
  if (!(std::abs(z) <= exp_.z_radius) || z.real() <= 0.0)
    throw DomainError("AbelFunction: point outside the validated series region");
  return exp_.z_deriv_z(z) * map_->alpha();
}

cplx AbelFunction::eval(cplx x) const {
  if (x == cplx{0.0}) return std::numeric_limits<double>::infinity();
  if (in_series_region(x)) return eval_series(x);
  const bool real = x.imag() == 0.0;
  if (real && !(x.real() > 0.0 && x.real() <= 1.0 + 1e-15))
    throw DomainError("AbelFunction::eval: real argument must lie in (0,1]");
  cplx y = x;
  std::size_t k = 0;
  while (!in_series_region(y)) {
    if (++k > max_steps_) throw DomainError("AbelFunction::eval: series region not reached");
    y = real ? cplx{map_->eval_fb_inverse(std::min(y.real(), 1.0))} : map_->eval_fb_inverse(y, y);
  }
  return eval_series(y) - static_cast<double>(k);
}

cplx AbelFunction::eval_prime(cplx x) const {
  if (in_series_region(x)) return eval_prime_series(x);
  const bool real = x.imag() == 0.0;
  if (real && !(x.real() > 0.0 && x.real() <= 1.0 + 1e-15))
    throw DomainError("AbelFunction::eval_prime: real argument must lie in (0,1]");
  cplx y = x;
  cplx dprod{1.0};
  std::size_t k = 0;
  while (!in_series_region(y)) {
    if (++k > max_steps_) throw DomainError("AbelFunction::eval_prime: series region not reached");
    y = real ? cplx{map_->eval_fb_inverse(std::min(y.real(), 1.0))} : map_->eval_fb_inverse(y, y);
    dprod /= map_->eval_fb_prime(y);
  }
  return eval_prime_series(y) * dprod;
}

cplx AbelFunction::eval_inverse_series(cplx y) const { return std::pow(eval_inverse_z(y), 1.0 / map_->alpha()); }

cplx AbelFunction::eval_inverse_z(cplx y) const {
  const cplx w = y - exp_.a0;
  cplx z = exp_.a_minus1 / w;
  if (z.real() > 0.0) z = exp_.a_minus1 / (w - exp_.a_log * std::log(z));
  for (int it = 0; it < 100; ++it) {
    const cplx step = (exp_.eval_z(z) - y) / exp_.deriv_z(z);
    z -= step;
    if (!(z.real() > 0.0)) throw DomainError("AbelFunction::eval_inverse: Newton left the half plane");
    if (std::abs(step) <= 4 * kEps * std::abs(z)) {
      if (!(std::abs(z) <= exp_.z_radius))
        throw DomainError("AbelFunction::eval_inverse: result outside the validated series region");
      return z;
    }
  }
  throw ConvergenceError("AbelFunction::eval_inverse: Newton did not converge");
}

double AbelFunction::eval_inverse(double y) const {
  if (y < 0.0) {
    if (y < -1e-13) throw DomainError("AbelFunction::eval_inverse: y must be non-negative");
    y = 0.0;
  }
  if (y >= y_star_) return eval_inverse_series(cplx{y}).real();
  const double m = std::floor(y);
  const double y0 = y - m;
  // A is decreasing on [a,1] from 1 to 0.
  const double a = map_->a();
  double lo = a, hi = 1.0;
  double x = 1.0 - y0 * (1.0 - a);
  bool converged = false;
  for (int it = 0; it < 200 && !converged; ++it) {
    const double r = eval(x) - y0;
    if (r > 0.0) lo = x; else hi = x;
    if (r == 0.0) break;
    double next = x - r / eval_prime(x);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    converged = std::abs(next - x) <= 4 * kEps || hi - lo <= 4 * kEps;
    x = next;
  }
  if (!converged && !(std::abs(eval(x) - y0) <= 1e-13))
    throw ConvergenceError("AbelFunction::eval_inverse: Newton on [a,1] failed");
  for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k) x = map_->eval_fb_inverse(x);
  return x;
}

cplx AbelFunction::eval_inverse(cplx y) const {
  if (y.real() >= y_star_) return eval_inverse_series(y);
  if (y.imag() != 0.0)
    throw DomainError("AbelFunction::eval_inverse: complex argument outside the series region");
  return cplx{eval_inverse(y.real())};
}

AbelFunction normalize_constant(const AbelFunction& af) { return normalize_constant(af, 0); }

AbelFunction normalize_constant(const AbelFunction& af, std::size_t extra_depth) {
  AbelFunction out = af;
  const PMMap& map = af.map();
  double x = 1.0;
  std::size_t k = 0;
  while (!(std::pow(x, map.alpha()) <= af.switch_radius())) {
    if (++k > af.max_backward_steps()) throw DomainError("normalize_constant: too many backward steps");
    x = map.eval_fb_inverse(x);
  }
  for (std::size_t j = 0; j < extra_depth; ++j, ++k) x = map.eval_fb_inverse(x);
  const double z = std::pow(x, map.alpha());
  out.exp_.a0 = 0.0;
  out.exp_.a0 = static_cast<double>(k) - out.exp_.eval_z(z).real();
  out.norm_steps_ = k;
  out.refresh_y_star();
  return out;
}

AbelFunction make_abel_function(std::shared_ptr<const PMMap> map, const AbelOptions& opts) {
  AbelExpansion e = compute_coefficients(*map, opts.N, opts.series_order);
  e.z_radius = estimate_z_radius(*map, e, opts.residual_tol);
  const double sw = opts.switch_radius > 0.0 ? opts.switch_radius : 0.25 * e.z_radius;
  AbelFunction af(std::move(map), std::move(e), sw, opts.max_backward_steps);
  return normalize_constant(af);
}

AbelFunction make_abel_function(const PMMap& map, const AbelOptions& opts) {
  return make_abel_function(std::make_shared<const PMMap>(map), opts);
}

} // namespace intermap
