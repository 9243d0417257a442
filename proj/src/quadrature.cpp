#include "intermap/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace intermap {

double bernoulli_even(int k) {
  if (k < 1) throw InvalidArgument("bernoulli_even: k must be >= 1");
  static constexpr double kTable[] = {1.0 / 6,          -1.0 / 30,        1.0 / 42,
                                      -1.0 / 30,        5.0 / 66,         -691.0 / 2730,
                                      7.0 / 6,          -3617.0 / 510,    43867.0 / 798,
                                      -174611.0 / 330};
  if (k <= 10) return kTable[k - 1];
  const double n = 2.0 * k;
  // zeta(2k) by direct summation; for k > 10 the terms decay like j^{-22}.
  double zeta = 0.0;
  for (int j = 40; j >= 1; --j) zeta += std::pow(static_cast<double>(j), -n);
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  // B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}, evaluated in logs.
  const double log_mag = std::log(2.0) + std::lgamma(n + 1.0) - n * std::log(2.0 * std::numbers::pi);
  return sign * std::exp(log_mag) * zeta;
}

std::vector<UnitNode> tanh_sinh_unit(double h, double s_min) {
  const double t_max = std::asinh(-std::log(s_min) / std::numbers::pi);
  std::vector<UnitNode> nodes;
  const int kmax = static_cast<int>(std::floor(t_max / h));
  nodes.reserve(2 * static_cast<std::size_t>(kmax) + 1);
  for (int k = -kmax; k <= kmax; ++k) {
    const double t = k * h;
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    // s = 1/(1+e^{-2u}), 1-s = 1/(1+e^{2u})
    const double s = 1.0 / (1.0 + std::exp(-2.0 * u));
    const double sc = 1.0 / (1.0 + std::exp(2.0 * u));
    if (s < s_min || sc < s_min) continue;
    const double w = h * std::numbers::pi * std::cosh(t) * s * sc;
    nodes.push_back({s, sc, w});
  }
  return nodes;
}

double tanh_sinh_step_for(std::size_t points, double s_min) {
  const double t_max = std::asinh(-std::log(s_min) / std::numbers::pi);
  return 2.0 * t_max / static_cast<double>(points);
}

QuadResult tanh_sinh(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                     std::size_t initial_points, int max_doublings, double s_min) {
  const double len = hi - lo;
  double h = tanh_sinh_step_for(initial_points, s_min);
  double prev = 0.0;
  std::size_t evals = 0;
  for (int level = 0; level <= max_doublings; ++level, h *= 0.5) {
    double sum = 0.0;
    for (const auto& nd : tanh_sinh_unit(h, s_min)) {
      // Evaluate near the nearer endpoint without cancellation.
      const double x = nd.s < 0.5 ? lo + len * nd.s : hi - len * nd.one_minus_s;
      sum += nd.w * f(x);
      ++evals;
    }
    sum *= len;
    if (level > 0 && std::abs(sum - prev) <= rel_tol * std::max(std::abs(sum), 1e-300))
      return {sum, std::abs(sum - prev), evals};
    prev = sum;
  }
  throw ConvergenceError("tanh_sinh: no convergence within the doubling cap");
}

void clenshaw_curtis(std::size_t n, double lo, double hi, std::vector<double>& nodes,
                     std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("clenshaw_curtis: n must be >= 1");
  nodes.assign(n + 1, 0.0);
  weights.assign(n + 1, 0.0);
  const double pi = std::numbers::pi;
  for (std::size_t j = 0; j <= n; ++j) {
    const double theta = pi * static_cast<double>(j) / static_cast<double>(n);
    nodes[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
    double w = 1.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const double b = (2 * k == n) ? 1.0 : 2.0;
      w -= b * std::cos(2.0 * static_cast<double>(k) * theta) / (4.0 * static_cast<double>(k * k) - 1.0);
    }
    const double c = (j == 0 || j == n) ? 1.0 : 2.0;
    weights[j] = c * w / static_cast<double>(n) * 0.5 * (hi - lo);
  }
}

QuadResult clenshaw_curtis_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol, std::size_t n0, std::size_t n_max) {
  std::vector<double> x, w;
  double prev = 0.0;
  std::size_t evals = 0;
  for (std::size_t n = n0; n <= n_max; n *= 2) {
    clenshaw_curtis(n, lo, hi, x, w);
    double sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) sum += w[j] * f(x[j]);
    evals += n + 1;
    if (n > n0 && std::abs(sum - prev) <= rel_tol * std::max(std::abs(sum), 1e-300))
      return {sum, std::abs(sum - prev), evals};
    prev = sum;
  }
  throw ConvergenceError("clenshaw_curtis_adaptive: no convergence");
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

} // namespace intermap
