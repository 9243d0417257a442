#ifndef INTERMAP_SERIES_HPP
#define INTERMAP_SERIES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "intermap/types.hpp"

namespace intermap {

/// Truncated power series c_0 + c_1 z + ... + c_M z^M. Every binary operation
/// truncates its result to the smaller operand order, so no coefficient past
/// the known order is ever read.
class TruncatedSeries {
public:
  TruncatedSeries() : coeffs_(1, cplx{0.0}) {}
  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1, cplx{0.0}) {}
  TruncatedSeries(std::vector<cplx> coeffs, std::size_t order);
  TruncatedSeries(std::initializer_list<cplx> coeffs, std::size_t order);

  static TruncatedSeries constant(cplx c, std::size_t order);
  static TruncatedSeries identity(std::size_t order);

  std::size_t order() const { return coeffs_.size() - 1; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : cplx{0.0}; }
  cplx& at(std::size_t k) { return coeffs_.at(k); }

  cplx eval(cplx z) const;
  TruncatedSeries derivative() const;
  TruncatedSeries truncated(std::size_t order) const;
  /// Divides by z^k; requires the first k coefficients to vanish (to tol).
  TruncatedSeries shift_down(std::size_t k, double tol = 0.0) const;
  /// Estimate of the convergence radius from the tail coefficients (root test).
  double radius_estimate() const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(cplx s);

private:
  std::vector<cplx> coeffs_;
};

TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b);
TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b);
TruncatedSeries operator*(cplx s, TruncatedSeries a);

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries reciprocal(const TruncatedSeries& a);
/// log of a series with c_0 = 1.
TruncatedSeries log1(const TruncatedSeries& a);
/// exp of a series with c_0 = 0.
TruncatedSeries exp0(const TruncatedSeries& a);
/// a^p for a series with c_0 = 1.
TruncatedSeries pow1(const TruncatedSeries& a, double p);
/// outer(inner(z)) for an inner series with c_0 = 0 (Horner on series).
TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner);
/// Compositional inverse of a series with c_0 = 0, c_1 != 0 (series Newton).
TruncatedSeries invert_series(const TruncatedSeries& a);

/// pole/z + logc*log(z) + series(z): the shape of a truncated Abel expansion.
struct LogLaurentSeries {
  cplx pole{0.0};
  cplx logc{0.0};
  TruncatedSeries series;

  cplx eval(cplx z) const;
  std::size_t order() const { return series.order(); }
};

LogLaurentSeries operator-(const LogLaurentSeries& a, const LogLaurentSeries& b);

/// outer(inner(z)) for a tangent-to-identity inner series (c_0 = 0, c_1 = 1).
/// The pole part is expanded through 1/inner and the log part through
/// log z + log(inner/z); the result has order inner.order() - 2 when the pole
/// is non-zero.
LogLaurentSeries compose(const LogLaurentSeries& outer, const TruncatedSeries& inner);

} // namespace intermap

#endif
