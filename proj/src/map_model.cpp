#include "intermap/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace intermap {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

GoodBranch GoodBranch::make_affine(double slope, double intercept) {
  GoodBranch b;
  b.eval = [slope, intercept](cplx w) { return slope * w + intercept; };
  b.deriv = [slope](cplx) { return cplx{slope}; };
  b.cell_lo = std::min(intercept, slope + intercept);
  b.cell_hi = std::max(intercept, slope + intercept);
  b.affine = std::make_pair(slope, intercept);
  return b;
}

GoodBranch GoodBranch::make_analytic(std::function<cplx(cplx)> eval, std::function<cplx(cplx)> deriv) {
  GoodBranch b;
  b.eval = std::move(eval);
  b.deriv = std::move(deriv);
  const double v0 = b.eval(0.0).real();
  const double v1 = b.eval(1.0).real();
  b.cell_lo = std::min(v0, v1);
  b.cell_hi = std::max(v0, v1);
  return b;
}

double GoodBranch::forward(double x) const {
  if (affine) return (x - affine->second) / affine->first;
  // Safeguarded Newton for v(w) = x on [0,1]; v is monotone.
  const bool increasing = eval(1.0).real() > eval(0.0).real();
  double lo = 0.0, hi = 1.0;
  double w = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double r = eval(w).real() - x;
    if ((r > 0.0) == increasing) hi = w; else lo = w;
    const double dv = deriv(w).real();
    double next = w - r / dv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 4 * kEps * std::max(1.0, std::abs(w))) return next;
    w = next;
  }
  throw ConvergenceError("GoodBranch::forward: no convergence");
}

PMMap::PMMap(double alpha, double a, std::vector<double> h_coeffs, std::vector<GoodBranch> branches,
             std::string label)
    : alpha_(alpha), a_(a), h_(std::move(h_coeffs)), branches_(std::move(branches)),
      label_(std::move(label)) {
  if (!(alpha_ > 0.0)) throw InvalidArgument("PMMap: alpha must be positive");
  if (!(a_ > 0.0 && a_ < 1.0)) throw InvalidArgument("PMMap: branch boundary a must lie in (0,1)");
  if (h_.size() < 2) throw InvalidArgument("PMMap: h needs at least two coefficients");
  if (h_.size() > kDefaultHOrder + 1) h_.resize(kDefaultHOrder + 1);
  if (std::abs(h_[0] - 1.0) > 1e-15) throw InvalidArgument("PMMap: h(0) must equal 1");
  if (!(h_[1] > 0.0)) throw InvalidArgument("PMMap: h'(0) must be positive");
  if (branches_.empty()) throw InvalidArgument("PMMap: at least one good branch is required");

  while (h_.size() > 2 && h_.back() == 0.0) h_.pop_back();
  // Short coefficient lists are treated as exact polynomials (entire h);
  // longer ones are truncations of a series whose radius we estimate.
  if (h_.size() < 4) {
    h_radius_ = std::numeric_limits<double>::infinity();
  } else {
    std::vector<cplx> c(h_.begin(), h_.end());
    h_radius_ = TruncatedSeries(c, h_.size() - 1).radius_estimate();
  }

  if (std::abs(eval_fb(a_).real() - 1.0) > 1e-12)
    throw InvalidArgument("PMMap: f_b(a) must equal 1");
  for (const auto& b : branches_) {
    if (b.cell_lo < a_ - 1e-12 || b.cell_hi > 1.0 + 1e-12)
      throw InvalidArgument("PMMap: good branch cell must lie in [a,1]");
    for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      if (!(std::abs(b.deriv(w)) < 1.0))
        throw InvalidArgument("PMMap: good inverse branch must be contracting");
    }
  }
}

cplx PMMap::h(cplx u) const {
  cplx acc{0.0};
  for (auto it = h_.rbegin(); it != h_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

cplx PMMap::h_prime(cplx u) const {
  cplx acc{0.0};
  for (std::size_t k = h_.size() - 1; k >= 1; --k) acc = acc * u + static_cast<double>(k) * h_[k];
  return acc;
}

cplx PMMap::eval_fb(cplx x) const {
  if (x == cplx{0.0}) return 0.0;
  const cplx u = std::pow(x, alpha_);
  if (std::abs(u) > h_radius_) throw DomainError("eval_fb: |x^alpha| outside the h series radius");
  return x * h(u);
}

cplx PMMap::eval_fb_prime(cplx x) const {
  if (x == cplx{0.0}) return 1.0;
  const cplx u = std::pow(x, alpha_);
  if (std::abs(u) > h_radius_) throw DomainError("eval_fb_prime: |x^alpha| outside the h series radius");
  return h(u) + alpha_ * u * h_prime(u);
}

double PMMap::eval_fb_inverse(double x, int max_iter) const {
  if (x < 0.0 || x > 1.0 + 1e-15) throw DomainError("eval_fb_inverse: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  double lo = 0.0, hi = a_;
  // f_b is convex, so Newton from the right of the root never overshoots it.
  double y = std::min(x, a_);
  for (int it = 0; it < max_iter; ++it) {
    const double r = eval_fb(y).real() - x;
    if (r > 0.0) hi = y; else lo = y;
    if (r == 0.0) return y;
    double next = y - r / eval_fb_prime(y).real();
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 4 * kEps * next || hi - lo <= 4 * kEps * hi) return next;
    y = next;
  }
  if (std::abs(eval_fb(y).real() - x) <= 16 * kEps * x) return y;
  throw ConvergenceError("eval_fb_inverse: Newton/bisection did not converge");
}

cplx PMMap::eval_fb_inverse(cplx x, std::optional<cplx> seed, int max_iter) const {
  if (x == cplx{0.0}) return 0.0;
  cplx y = seed.value_or(x);
  for (int it = 0; it < max_iter; ++it) {
    const cplx step = (eval_fb(y) - x) / eval_fb_prime(y);
    y -= step;
    if (std::abs(step) <= 2 * kEps * std::abs(y)) return y;
  }
  throw ConvergenceError("eval_fb_inverse: complex Newton did not converge");
}

double PMMap::eval_fg(double x) const {
  for (const auto& b : branches_) {
    if (x >= b.cell_lo && x <= b.cell_hi) return b.forward(x);
  }
  throw DomainError("eval_fg: x not covered by any good branch");
}

double PMMap::eval_f(double x) const {
  return x < a_ ? eval_fb(x).real() : eval_fg(x);
}

TruncatedSeries PMMap::hat_F_series(std::size_t order) const {
  std::vector<cplx> hc(h_.begin(), h_.end());
  TruncatedSeries hs(hc, order);
  TruncatedSeries ha = pow1(hs, alpha_);
  TruncatedSeries f(order);
  for (std::size_t k = 1; k <= order; ++k) f.at(k) = ha[k - 1];
  return f;
}

TruncatedSeries PMMap::hat_T_series(std::size_t order, std::size_t max_order) const {
  if (order < 2 || order > max_order) throw InvalidArgument("hat_T_series: order out of range");
  TruncatedSeries t = invert_series(hat_F_series(order));
  if (std::abs(t[1] - 1.0) > 1e-10) throw ConvergenceError("hat_T_series: series inversion lost accuracy");
  return t;
}

PMMap lsv(double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("lsv: alpha must be positive");
  return PMMap(alpha, 0.5, {1.0, std::pow(2.0, alpha)}, {GoodBranch::make_affine(0.5, 0.5)},
               "lsv(" + std::to_string(alpha) + ")");
}

UnpReport verify_unp(const std::vector<GoodBranch>& branches, double p, double q,
                     std::size_t sample_count) {
  if (sample_count < 10) throw InvalidArgument("verify_unp: need at least 10 samples");
  UnpReport rep;
  rep.lambda_check = std::numeric_limits<double>::infinity();
  rep.samples = sample_count;
  const double hstep = 1e-5;
  for (const auto& b : branches) {
    for (std::size_t i = 0; i < sample_count; ++i) {
      // Midpoint samples of [p,q]; the CE ratio is singular only at the ends.
      const double w = p + (q - p) * (static_cast<double>(i) + 0.5) / static_cast<double>(sample_count);
      const double x = b.eval(w).real();
      const double dv = std::abs(b.deriv(w));
      const double lam = std::sqrt(std::max(0.0, (q - x) * (x - p))) /
                         std::sqrt((q - w) * (w - p)) / dv;
      rep.lambda_check = std::min(rep.lambda_check, lam);
      const double d2 = (b.deriv(w + hstep) - b.deriv(w - hstep)).real() / (2 * hstep);
      rep.max_distortion = std::max(rep.max_distortion, std::abs(d2 / b.deriv(w).real()));
    }
    const double dist = std::min(b.cell_lo - p, q - b.cell_hi);
    if (dist > 1e-15) rep.spacing = std::max(rep.spacing, (b.cell_hi - b.cell_lo) / dist);
  }
  rep.expansion_ok = rep.lambda_check > 1.0;
  return rep;
}

UnpReport verify_unp(const PMMap& map, std::size_t sample_count) {
  return verify_unp(map.branches(), 0.0, 1.0, sample_count);
}

} // namespace intermap
