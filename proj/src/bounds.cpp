#include "intermap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace intermap {

namespace {

constexpr double kSafety = 1.25;
constexpr double kC = 0.4;
constexpr std::size_t kOrder = 40;

// Coefficients of g: 1/T = 1/z + hhat1 + z * g(z).
TruncatedSeries g_coeffs(const PMMap& map) {
  const TruncatedSeries t = map.hat_T_series(kOrder);
  const TruncatedSeries r = reciprocal(t.shift_down(1, 1e-14));
  TruncatedSeries g(r.order() - 2);
  for (std::size_t k = 2; k <= r.order(); ++k) g.at(k - 2) = r[k];
  return g;
}

} // namespace

double BoundConstants::r_n(std::size_t n) const {
  if (n == 0) throw InvalidArgument("r_n: n must be positive");
  return std::min(R, kC / (hhat1 + std::sqrt(kC * G))) / static_cast<double>(n);
}

double BoundConstants::gimel(double beta_bar, double delta) const {
  if (!(beta_bar > delta + 1.0)) throw InvalidArgument("gimel: need beta_bar > delta + 1");
  return std::pow(1.0 - aleph, -beta_bar) * std::pow(hhat1, -delta - 1.0) *
         (1.0 / (delta + 1.0) + 1.0 / (beta_bar - delta - 1.0) + hhat1 / R1);
}

double default_series_radius(const PMMap& map) {
  return std::min(0.5 * map.hat_T_series(kOrder).radius_estimate(), 0.5 * map.h_radius());
}

double estimate_G(const PMMap& map, double R, std::size_t samples) {
  const TruncatedSeries g = g_coeffs(map);
  double sup = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    const cplx z = std::polar(R, 2.0 * std::numbers::pi * static_cast<double>(j) / samples);
    sup = std::max(sup, std::abs(g.eval(z)));
  }
  if (!std::isfinite(sup)) throw DomainError("estimate_G: series diverges at the candidate radius");
  return kSafety * sup;
}

Suprema estimate_suprema(const PMMap& map, double R, double R1, std::size_t samples) {
  const double G = estimate_G(map, R, samples);
  // d/dz (z g) = sum (k+1) g_k z^k
  const TruncatedSeries g = g_coeffs(map);
  TruncatedSeries zg(g.order() + 1);
  for (std::size_t k = 0; k <= g.order(); ++k) zg.at(k + 1) = g[k];
  const TruncatedSeries dzg = zg.derivative();
  double sup = 0.0;
  const double c = 0.5 * R1;
  for (std::size_t j = 0; j < samples; ++j) {
    const cplx z = c + std::polar(c, 2.0 * std::numbers::pi * static_cast<double>(j) / samples);
    sup = std::max(sup, std::abs(dzg.eval(z)));
  }
  if (!std::isfinite(sup)) throw DomainError("estimate_suprema: series diverges on the region");
  return {G, kSafety * sup};
}

BoundConstants lemma_constants(const PMMap& map, double R, std::size_t samples, double aleph) {
  BoundConstants bc;
  const TruncatedSeries t = map.hat_T_series(kOrder);
  bc.hhat1 = -t[2].real();
  bc.aleph = aleph;
  bc.R = R > 0.0 ? R : default_series_radius(map);
  bc.G = estimate_G(map, bc.R, samples);
  bc.R1 = std::min(bc.R, aleph * bc.hhat1 / bc.G);
  bc.Gprime = estimate_suprema(map, bc.R, bc.R1, samples).Gprime;
  const double ih2 = 1.0 / (bc.hhat1 * bc.hhat1);
  bc.d2 = 1.0 + 2.5 * std::exp(0.6) * (1.0 + kC * bc.G * ih2);
  bc.d1 = (1.0 + bc.G * ih2) / (bc.d2 * bc.d2);
  bc.Z = std::min({bc.R1, 1.0 / std::sqrt(2.0 * bc.Gprime), 1.0 / (2.0 * bc.Gprime * bc.gimel(2.0, 0.0))});
  return bc;
}

double abel_series_error(const BoundConstants& bc, std::size_t n, cplx z) {
  const double rn = bc.r_n(n);
  const double az = std::abs(z);
  if (az > std::min(bc.R1, rn)) throw DomainError("abel_series_error: |z| exceeds min(R1, r_n)");
  const double m = static_cast<double>(n) + 2.0;
  return bc.d3(n) * std::exp(m * std::log(bc.d2 / rn) + (m - 1.0) * std::log(az));
}

double em_error(const BoundConstants& bc, const Decay& q, double alpha, double abs_dA_z, double n_star,
                double abs_z_nstar, double rho, int K) {
  const double bb = q.beta_bar(alpha);
  const double h1 = bc.hhat1;
  const double p = 2.0 * K + 1.0;
  const double pre = std::lgamma(p + 1.0) - p * std::log(2.0 * std::numbers::pi * rho);
  const double front = std::exp(pre) * 4.0 * q.Qbar * std::pow(abs_dA_z, q.gamma) / (1.0 - bc.aleph) *
                       std::pow(1.0 + n_star / rho, q.delta);
  const double common = std::pow(2.0, std::abs(q.gamma)) * std::pow(h1, q.gamma);
  double W;
  if (bb >= 0.0) {
    W = std::pow(rho, q.delta) / (p - q.delta) * common * std::pow(bc.Z, -bb);
  } else {
    const double m = std::max(std::pow(abs_z_nstar, -1.0) / rho, 2.0 * h1 * (1.0 + 2.0 / (1.0 - bc.aleph)));
    W = std::pow(rho, q.delta - bb) / (p + bb - q.delta) * common * std::pow(m, -bb);
  }
  return front * W;
}

std::vector<cplx> sample_region(double s, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 4.0 / s), v(-2.0 / s, 2.0 / s);
  std::vector<cplx> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(1.0 / cplx{1.0 / s + u(rng), v(rng)});
  return out;
}

double abel_derivative_scaled(const AbelFunction& af, cplx z) {
  const AbelExpansion& e = af.expansion();
  if (!(std::abs(z) <= e.z_radius)) throw DomainError("abel_derivative_scaled: z outside the series region");
  return std::abs(z * e.z_deriv_z(z));
}

double abel_shift_defect(const AbelFunction& af, cplx z0, cplx m) {
  const AbelExpansion& e = af.expansion();
  if (!(std::abs(z0) <= e.z_radius)) throw DomainError("abel_shift_defect: z0 outside the series region");
  return std::abs(1.0 / af.eval_inverse_z(e.eval_z(z0) + m) - 1.0 / z0);
}

} // namespace intermap
