#include "intermap/orbit_sum.hpp"

#include <cmath>
#include <numbers>

#include "intermap/quadrature.hpp"

namespace intermap {

namespace {

constexpr double kFdStep = 1e-2;

cplx step_back(const PMMap& map, cplx y) {
  if (y.imag() == 0.0) return map.eval_fb_inverse(std::min(y.real(), 1.0));
  return map.eval_fb_inverse(y, y);
}

double threshold(const AbelFunction& af, const BoundConstants& bc, double rho) {
  return 1.0 / bc.Z + 2.0 * af.expansion().hhat1 + rho;
}

// Central-difference weights at offsets -3..3 (times h^order) for odd orders.
std::vector<double> fd_stencil(int order) {
  switch (order) {
    case 1: return {0, 0, -0.5, 0, 0.5, 0, 0};
    case 2: return {0, 0, 1, -2, 1, 0, 0};
    case 3: return {0, -0.5, 1, 0, -1, 0.5, 0};
    case 4: return {0, 1, -4, 6, -4, 1, 0};
    case 5: return {-0.5, 2, -2.5, 0, 2.5, -2, 0.5};
    default: throw InvalidArgument("finite-difference derivatives support orders 1..5 only");
  }
}

} // namespace

int EMParams::effective_K() const {
  if (K >= 0) return K;
  return static_cast<int>(std::lround(std::numbers::pi * rho - 0.5));
}

std::size_t n_star(const AbelFunction& af, const BoundConstants& bc, cplx z, double rho) {
  const double thr = threshold(af, bc, rho);
  const double alpha = af.map().alpha();
  cplx y = z;
  for (std::size_t n = 0; n <= af.max_backward_steps(); ++n) {
    if (std::pow(y, -alpha).real() >= thr) return n;
    y = step_back(af.map(), y);
  }
  throw DomainError("n_star: target region not reached within max_backward_steps");
}

OrbitRule::OrbitRule(const AbelFunction& af, const BoundConstants& bc, cplx z, const EMParams& p)
    : z_(z), K_(p.effective_K()) {
  const PMMap& map = af.map();
  const double alpha = map.alpha();
  const double thr = threshold(af, bc, p.rho);

  // Head: direct backward orbit until the target region.
  cplx y = z;
  cplx d{1.0};
  std::size_t n = 0;
  while (!(std::pow(y, -alpha).real() >= thr)) {
    nodes_.push_back({y, d, double(n), 1.0, d});
    if (++n > af.max_backward_steps()) throw DomainError("OrbitRule: target region not reached");
    y = step_back(map, y);
    d /= map.eval_fb_prime(y);
  }
  n_star_ = n;
  nodes_.push_back({y, d, double(n), 0.5, 0.5 * d});

  const cplx xs = y;
  const cplx As = af.eval_series(xs);
  // Work with D(x) = x A'(x), which stays finite near 0.
  const cplx Ds = af.eval_x_prime_series(xs);
  z_nstar_ = std::pow(std::abs(xs), alpha);
  abs_dA_z_ = std::abs(d * Ds / xs);

  // Tail: zeta = x* s on (0,1], weight -A'(zeta) x* ds.
  for (const UnitNode& u : tanh_sinh_unit(tanh_sinh_step_for(p.tail_points))) {
    const cplx zeta = xs * u.s;
    // Nodes that underflow carry no mass.
    if (std::abs(std::pow(zeta, alpha)) == 0.0) continue;
    const cplx Dz = af.eval_x_prime_series(zeta);
    const cplx nn = af.eval_series(zeta) - As + double(n_star_);
    const cplx w = -Dz / u.s * u.w;
    const cplx dd = d * Ds / Dz * u.s;
    nodes_.push_back({zeta, dd, nn, w, -d * Ds * u.w});
  }

  // Derivative nodes at n* + m.
  contour_begin_ = nodes_.size();
  std::vector<cplx> offsets;
  if (p.deriv_mode == DerivMode::cauchy_contour) {
    r_c_ = std::min(0.5 * p.rho, 1.0);
    const std::size_t P = p.quad_points;
    for (std::size_t j = 0; j < P; ++j) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(P);
      theta_.push_back(th);
      offsets.push_back(std::polar(r_c_, th));
    }
  } else {
    if (K_ > 3) throw InvalidArgument("OrbitRule: finite differences support K <= 3 only");
    for (int j = -3; j <= 3; ++j) offsets.push_back(kFdStep * j);
  }
  for (const cplx m : offsets) {
    cplx px, pd;
    if (m == cplx{0.0}) {
      px = xs;
      pd = d;
    } else {
      px = af.eval_inverse_series(As + m);
      pd = d * Ds / af.eval_x_prime_series(px) * (px / xs);
    }
    nodes_.push_back({px, pd, double(n_star_) + m, 0.0, 0.0});
  }
  // Correction weights for K_.
  fd_mode_ = p.deriv_mode == DerivMode::finite_difference;
  const std::vector<cplx> w = correction_weights(K_);
  for (std::size_t j = 0; j < w.size(); ++j) {
    OrbitNode& nd = nodes_[contour_begin_ + j];
    nd.w = w[j];
    nd.wd = w[j] * nd.d;
  }
}

// Weight of node j in -sum_{k<=K} B_2k/(2k)! d^{2k-1}/dn^{2k-1}.
std::vector<cplx> OrbitRule::correction_weights(int K) const {
  const std::size_t m = nodes_.size() - contour_begin_;
  std::vector<cplx> w(m, 0.0);
  for (int k = 1; k <= K; ++k) {
    const double bk = bernoulli_even(k) / (2.0 * k);
    const int order = 2 * k - 1;
    if (!fd_mode_) {
      for (std::size_t j = 0; j < m; ++j)
        w[j] -= bk * std::polar(1.0 / (double(m) * std::pow(r_c_, order)), -order * theta_[j]);
    } else {
      const auto st = fd_stencil(order);
      const double scale = std::pow(kFdStep, -order) / std::tgamma(order + 1.0);
      for (std::size_t j = 0; j < m; ++j) w[j] -= bk * st[j] * scale;
    }
  }
  return w;
}

cplx OrbitRule::apply(const Summand& q) const {
  cplx s{0.0};
  for (const OrbitNode& nd : nodes_) {
    if (q.linear_in_d) {
      if (nd.wd != cplx{0.0}) s += nd.wd * q.eval(nd.x, 1.0, nd.n);
    } else if (nd.w != cplx{0.0} && std::isfinite(std::abs(nd.w)) && std::isfinite(std::abs(nd.d))) {
      s += nd.w * q.eval(nd.x, nd.d, nd.n);
    }
  }
  return s;
}

cplx OrbitRule::apply(const Summand& q, int K) const {
  if (K == K_) return apply(q);
  cplx s{0.0};
  for (std::size_t i = 0; i < contour_begin_; ++i) {
    const OrbitNode& nd = nodes_[i];
    if (q.linear_in_d) {
      if (nd.wd != cplx{0.0}) s += nd.wd * q.eval(nd.x, 1.0, nd.n);
    } else if (std::isfinite(std::abs(nd.w)) && std::isfinite(std::abs(nd.d))) {
      s += nd.w * q.eval(nd.x, nd.d, nd.n);
    }
  }
  if (fd_mode_ && K > 3) throw InvalidArgument("OrbitRule: finite differences support K <= 3 only");
  const std::vector<cplx> w = correction_weights(K);
  const std::size_t m = w.size();
  for (std::size_t j = 0; j < m; ++j) {
    const OrbitNode& nd = nodes_[contour_begin_ + j];
    s += q.linear_in_d ? w[j] * nd.d * q.eval(nd.x, 1.0, nd.n) : w[j] * q.eval(nd.x, nd.d, nd.n);
  }
  return s;
}

EMResult euler_maclaurin_sum(const Summand& q, const AbelFunction& af, const BoundConstants& bc, cplx z,
                             const EMParams& p) {
  const OrbitRule rule(af, bc, z, p);
  const cplx v = rule.apply(q);
  double err;
  if (q.decay) {
    err = em_error(bc, *q.decay, af.map().alpha(), rule.abs_dA_z(), double(rule.n_star()), rule.z_nstar(),
                   p.rho, rule.K());
  } else {
    const bool capped = p.deriv_mode == DerivMode::finite_difference && rule.K() >= 3;
    err = std::abs(v - rule.apply(q, capped ? rule.K() - 1 : rule.K() + 1));
  }
  return {v, err, rule.n_star()};
}

cplx derivative_in_n(const Summand& q, const AbelFunction& af, double n0, cplx z, int order,
                     const EMParams& p) {
  if (order < 0) throw InvalidArgument("derivative_in_n: order must be non-negative");
  auto f = [&](cplx n) { return summand_r(q, af, n, z); };
  if (order == 0) return f(n0);
  if (p.deriv_mode == DerivMode::finite_difference) {
    const auto st = fd_stencil(order);
    cplx s{0.0};
    for (int j = -3; j <= 3; ++j)
      if (st[j + 3] != 0.0) s += st[j + 3] * f(n0 + kFdStep * j);
    return s * std::pow(kFdStep, -order);
  }
  const double r = std::min(0.5 * p.rho, 1.0);
  if (n0 - r < 0.0) throw DomainError("derivative_in_n: contour crosses Re n < 0");
  const std::size_t P = p.quad_points;
  cplx s{0.0};
  for (std::size_t j = 0; j < P; ++j) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(P);
    s += f(n0 + std::polar(r, th)) * std::polar(1.0, -order * th);
  }
  return s * std::tgamma(order + 1.0) / (static_cast<double>(P) * std::pow(r, order));
}

cplx tail_integral(const Summand& q, const AbelFunction& af, cplx z, std::size_t n_star_value,
                   std::size_t quad_points) {
  const BranchPoint bp = branch_point(af, z, double(n_star_value));
  const cplx xs = bp.point;
  if (!af.in_series_region(xs)) throw DomainError("tail_integral: f_b^{-n*}(z) outside the series region");
  const cplx As = af.eval_series(xs);
  const cplx Ds = bp.deriv * af.eval_x_prime_series(xs);
  const double alpha = af.map().alpha();
  auto sum = [&](double h) {
    cplx s{0.0};
    for (const UnitNode& u : tanh_sinh_unit(h)) {
      const cplx zeta = xs * u.s;
      if (std::abs(std::pow(zeta, alpha)) == 0.0) continue;
      const cplx Dz = af.eval_x_prime_series(zeta);
      const cplx nn = af.eval_series(zeta) - As + double(n_star_value);
      if (q.linear_in_d) {
        s += -Ds * u.w * q.eval(zeta, 1.0, nn);
      } else {
        const cplx w = -Dz / u.s * u.w;
        if (std::isfinite(std::abs(w))) s += w * q.eval(zeta, Ds / Dz * u.s, nn);
      }
    }
    return s;
  };
  double h = tanh_sinh_step_for(quad_points);
  cplx prev = sum(h);
  for (int i = 0; i < 3; ++i) {
    h *= 0.5;
    const cplx cur = sum(h);
    if (std::abs(cur - prev) <= 1e-13 * std::abs(cur) + 1e-300) return cur;
    prev = cur;
  }
  throw ConvergenceError("tail_integral: tanh-sinh did not converge");
}

} // namespace intermap
