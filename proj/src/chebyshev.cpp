#include "intermap/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace intermap {

ChebBasis::ChebBasis(double p, double q, std::size_t N) : p_(p), q_(q), N_(N) {
  if (!(q > p)) throw InvalidArgument("ChebBasis: need p < q");
  if (N < 1) throw InvalidArgument("ChebBasis: need N >= 1");
  const std::size_t m = N + 1;
  nodes_.resize(m);
  cos_table_.resize(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    const double th = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
    nodes_[j] = 0.5 * (p + q) + 0.5 * (q - p) * std::cos(th);
    for (std::size_t k = 0; k < m; ++k) cos_table_[j * m + k] = std::cos(static_cast<double>(k) * th);
  }
}

std::vector<double> ChebBasis::values_to_coeffs(const std::vector<double>& v) const {
  const std::size_t m = N_ + 1;
  if (v.size() != m) throw InvalidArgument("values_to_coeffs: size mismatch");
  std::vector<double> c(m, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) c[k] += v[j] * cos_table_[j * m + k];
  for (std::size_t k = 0; k < m; ++k) c[k] *= (k == 0 ? 1.0 : 2.0) / static_cast<double>(m);
  return c;
}

std::vector<double> ChebBasis::coeffs_to_values(const std::vector<double>& c) const {
  const std::size_t m = N_ + 1;
  if (c.size() != m) throw InvalidArgument("coeffs_to_values: size mismatch");
  std::vector<double> v(m, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) v[j] += c[k] * cos_table_[j * m + k];
  return v;
}

namespace {
template <class T>
T clenshaw(const std::vector<double>& c, T t) {
  T b1{0.0}, b2{0.0};
  for (std::size_t k = c.size(); k-- > 1;) {
    const T b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}
} // namespace

double ChebBasis::eval(const std::vector<double>& c, double x) const { return clenshaw(c, to_unit(x)); }
cplx ChebBasis::eval(const std::vector<double>& c, cplx x) const { return clenshaw(c, to_unit(x)); }

void ChebBasis::eval_all(cplx x, std::vector<cplx>& out) const {
  out.resize(N_ + 1);
  const cplx t = to_unit(x);
  out[0] = 1.0;
  if (N_ >= 1) out[1] = t;
  for (std::size_t k = 2; k <= N_; ++k) out[k] = 2.0 * t * out[k - 1] - out[k - 2];
}

double ChebBasis::integral(std::size_t k) const {
  if (k % 2 == 1) return 0.0;
  const double kk = static_cast<double>(k);
  return (q_ - p_) / (1.0 - kk * kk);
}

double ChebBasis::integrate(const std::vector<double>& c) const {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); k += 2) s += c[k] * integral(k);
  return s;
}

bool ChebSolution::coefficients_decayed() const {
  double mx = 0.0;
  for (double v : coeffs) mx = std::max(mx, std::abs(v));
  const std::size_t start = coeffs.size() - coeffs.size() / 4;
  for (std::size_t k = start; k < coeffs.size(); ++k)
    if (std::abs(coeffs[k]) >= 1e-10 * mx) return false;
  return true;
}

} // namespace intermap
