#include "intermap/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace intermap {

TruncatedSeries::TruncatedSeries(std::vector<cplx> coeffs, std::size_t order)
    : coeffs_(order + 1, cplx{0.0}) {
  std::copy_n(coeffs.begin(), std::min(coeffs.size(), order + 1), coeffs_.begin());
}

TruncatedSeries::TruncatedSeries(std::initializer_list<cplx> coeffs, std::size_t order)
    : TruncatedSeries(std::vector<cplx>(coeffs), order) {}

TruncatedSeries TruncatedSeries::constant(cplx c, std::size_t order) {
  TruncatedSeries s(order);
  s.coeffs_[0] = c;
  return s;
}

TruncatedSeries TruncatedSeries::identity(std::size_t order) {
  TruncatedSeries s(order);
  if (order >= 1) s.coeffs_[1] = 1.0;
  return s;
}

cplx TruncatedSeries::eval(cplx z) const {
  cplx acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

TruncatedSeries TruncatedSeries::derivative() const {
  const std::size_t m = order();
  TruncatedSeries d(m == 0 ? 0 : m - 1);
  for (std::size_t k = 1; k <= m; ++k) d.coeffs_[k - 1] = static_cast<double>(k) * coeffs_[k];
  return d;
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
  return TruncatedSeries(coeffs_, std::min(order, this->order()));
}

TruncatedSeries TruncatedSeries::shift_down(std::size_t k, double tol) const {
  if (k > order()) throw InvalidArgument("shift_down: shift exceeds series order");
  for (std::size_t i = 0; i < k; ++i) {
    if (std::abs(coeffs_[i]) > tol)
      throw InvalidArgument("shift_down: leading coefficients do not vanish");
  }
  return TruncatedSeries(std::vector<cplx>(coeffs_.begin() + static_cast<long>(k), coeffs_.end()),
                         order() - k);
}

double TruncatedSeries::radius_estimate() const {
  // Root test on the upper half of the coefficients; the minimum is the
  // conservative choice for a truncated tail.
  double r = std::numeric_limits<double>::infinity();
  const std::size_t m = order();
  for (std::size_t k = std::max<std::size_t>(2, m / 2); k <= m; ++k) {
    const double c = std::abs(coeffs_[k]);
    if (c > 0.0) r = std::min(r, std::pow(c, -1.0 / static_cast<double>(k)));
  }
  return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  coeffs_.resize(std::min(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
TruncatedSeries operator*(cplx s, TruncatedSeries a) { return a *= s; }

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t m = std::min(a.order(), b.order());
  TruncatedSeries c(m);
  for (std::size_t i = 0; i <= m; ++i) {
    if (a[i] == cplx{0.0}) continue;
    for (std::size_t j = 0; i + j <= m; ++j) c.at(i + j) += a[i] * b[j];
  }
  return c;
}

TruncatedSeries reciprocal(const TruncatedSeries& a) {
  if (a[0] == cplx{0.0}) throw InvalidArgument("reciprocal: constant coefficient is zero");
  const std::size_t m = a.order();
  TruncatedSeries r(m);
  const cplx inv0 = 1.0 / a[0];
  r.at(0) = inv0;
  for (std::size_t n = 1; n <= m; ++n) {
    cplx s{0.0};
    for (std::size_t k = 1; k <= n; ++k) s += a[k] * r[n - k];
    r.at(n) = -s * inv0;
  }
  return r;
}

TruncatedSeries log1(const TruncatedSeries& a) {
  if (std::abs(a[0] - 1.0) > 1e-14) throw InvalidArgument("log1: constant coefficient must be 1");
  // l' = a'/a, solved coefficient-wise: n l_n = n a_n - sum_{k=1}^{n-1} k l_k a_{n-k}
  const std::size_t m = a.order();
  TruncatedSeries l(m);
  for (std::size_t n = 1; n <= m; ++n) {
    cplx s = static_cast<double>(n) * a[n];
    for (std::size_t k = 1; k < n; ++k) s -= static_cast<double>(k) * l[k] * a[n - k];
    l.at(n) = s / static_cast<double>(n);
  }
  return l;
}

TruncatedSeries exp0(const TruncatedSeries& a) {
  if (std::abs(a[0]) > 1e-14) throw InvalidArgument("exp0: constant coefficient must be 0");
  const std::size_t m = a.order();
  TruncatedSeries e(m);
  e.at(0) = 1.0;
  for (std::size_t n = 1; n <= m; ++n) {
    cplx s{0.0};
    for (std::size_t k = 1; k <= n; ++k) s += static_cast<double>(k) * a[k] * e[n - k];
    e.at(n) = s / static_cast<double>(n);
  }
  return e;
}

TruncatedSeries pow1(const TruncatedSeries& a, double p) { return exp0(cplx{p} * log1(a)); }

TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
  if (std::abs(inner[0]) > 1e-14) throw InvalidArgument("compose: inner series must vanish at 0");
  const std::size_t m = std::min(outer.order(), inner.order());
  TruncatedSeries acc(m);
  const TruncatedSeries in = inner.truncated(m);
  for (std::size_t k = outer.order() + 1; k-- > 0;) {
    acc = mul(acc, in);
    acc.at(0) += outer[k];
  }
  return acc;
}

TruncatedSeries invert_series(const TruncatedSeries& a) {
  if (std::abs(a[0]) > 1e-14) throw InvalidArgument("invert_series: constant coefficient must be 0");
  if (a[1] == cplx{0.0}) throw InvalidArgument("invert_series: linear coefficient is zero");
  const std::size_t m = a.order();
  TruncatedSeries t(m);
  t.at(1) = 1.0 / a[1];
  const TruncatedSeries da = a.derivative();
  const TruncatedSeries id = TruncatedSeries::identity(m);
  // Each Newton sweep doubles the number of correct coefficients.
  std::size_t correct = 2;
  while (true) {
    TruncatedSeries resid = compose(a, t) - id;
    TruncatedSeries slope = compose(da, t);
    // slope has order m-1; pad the correction back to order m.
    TruncatedSeries corr = mul(resid.truncated(m - 1), reciprocal(slope));
    for (std::size_t k = 0; k <= corr.order(); ++k) t.at(k) -= corr[k];
    t.at(0) = 0.0;
    if (correct > m + 1) break;
    correct *= 2;
  }
  // The top coefficient is outside the order-(m-1) Newton correction; one
  // fixed-point sweep at full order fixes it.
  TruncatedSeries resid = compose(a, t) - id;
  for (std::size_t k = 0; k <= m; ++k) t.at(k) -= resid[k] / a[1];
  t.at(0) = 0.0;
  return t;
}

cplx LogLaurentSeries::eval(cplx z) const {
  cplx v = series.eval(z);
  if (pole != cplx{0.0}) v += pole / z;
  if (logc != cplx{0.0}) v += logc * std::log(z);
  return v;
}

LogLaurentSeries operator-(const LogLaurentSeries& a, const LogLaurentSeries& b) {
  return LogLaurentSeries{a.pole - b.pole, a.logc - b.logc, a.series - b.series};
}

LogLaurentSeries compose(const LogLaurentSeries& outer, const TruncatedSeries& inner) {
  if (std::abs(inner[0]) > 1e-14) throw InvalidArgument("compose: inner series must vanish at 0");
  if (std::abs(inner[1] - 1.0) > 1e-12)
    throw InvalidArgument("compose: inner series must be tangent to the identity");
  const std::size_t m = inner.order();
  LogLaurentSeries out;
  out.series = compose(outer.series, inner);
  const TruncatedSeries ratio = inner.shift_down(1, 1e-14);  // inner/z, order m-1
  if (outer.pole != cplx{0.0}) {
    // pole/inner = pole/z * 1/ratio = pole/z + pole * (1/ratio - 1)/z
    TruncatedSeries r = reciprocal(ratio);
    r.at(0) = 0.0;
    TruncatedSeries shifted = r.shift_down(1);  // order m-2
    out.pole = outer.pole;
    out.series = out.series.truncated(m - 2) + outer.pole * shifted;
  }
  if (outer.logc != cplx{0.0}) {
    out.logc = outer.logc;
    out.series = out.series + outer.logc * log1(ratio);
  }
  return out;
}

} // namespace intermap
