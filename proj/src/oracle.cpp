#include "intermap/oracle.hpp"

#include <cmath>
#include <random>

#include "intermap/parallel.hpp"
#include "intermap/quadrature.hpp"

namespace intermap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Uniform seed in (0,1) avoiding the fixed point and dyadic traps.
double draw_seed(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(1e-3, 1.0 - 1e-3);
  return u(rng);
}

double stderr_of(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (n - 1.0) / n);
}

// Accumulates |[lo,hi] ∩ bin i| / |bin| into row i of `row_of`.
void deposit(double lo, double hi, double p, double width, std::size_t bins, std::size_t target,
             std::vector<std::vector<double>>& P) {
  if (hi < lo) std::swap(lo, hi);
  const auto first = static_cast<std::size_t>(std::clamp((lo - p) / width, 0.0, double(bins - 1)));
  for (std::size_t i = first; i < bins; ++i) {
    const double b0 = p + width * double(i), b1 = p + width * double(i + 1);
    if (b0 >= hi) break;
    const double len = std::min(hi, b1) - std::max(lo, b0);
    if (len > 0.0) P[i][target] += len / width;
  }
}

BinDensity power_iterate(const std::vector<std::vector<double>>& P, double p, double q) {
  const std::size_t bins = P.size();
  std::vector<double> m(bins, 1.0 / double(bins)), next(bins);
  for (int it = 0; it < 100000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < bins; ++i)
      for (std::size_t j = 0; j < bins; ++j) next[j] += m[i] * P[i][j];
    double tot = 0.0;
    for (double v : next) tot += v;
    double diff = 0.0;
    for (std::size_t j = 0; j < bins; ++j) {
      next[j] /= tot;
      diff += std::abs(next[j] - m[j]);
    }
    m.swap(next);
    if (diff < 1e-15) break;
    if (it == 99999) throw ConvergenceError("ulam: power iteration did not converge");
  }
  BinDensity d{p, q, {}};
  const double width = (q - p) / double(bins);
  for (double v : m) d.density.push_back(v / width);
  return d;
}

} // namespace

namespace {

// Forward iteration in extended precision: over long excursions the
// roundoff of double iteration is amplified by (f^tau)' past 1e-9.
long double step_ld(const PMMap& map, long double y) {
  if (y < static_cast<long double>(map.a())) {
    const long double u = std::pow(y, static_cast<long double>(map.alpha()));
    long double h = 0.0L;
    const auto& c = map.h_coeffs();
    for (std::size_t k = c.size(); k-- > 0;) h = h * u + static_cast<long double>(c[k]);
    return y * h;
  }
  for (const GoodBranch& b : map.branches()) {
    if (y >= b.cell_lo && y <= b.cell_hi) {
      if (b.affine) return (y - static_cast<long double>(b.affine->second)) / static_cast<long double>(b.affine->first);
      return b.forward(static_cast<double>(y));
    }
  }
  throw DomainError("iterate_return: point not covered by any good branch");
}

} // namespace

OrbitSample iterate_return(const PMMap& map, double x, long long cap) {
  if (!(x >= map.a() && x <= 1.0)) throw DomainError("iterate_return: x must lie in [a,1]");
  const long double a = map.a();
  long double y = step_ld(map, x);
  long long t = 1;
  while (y < a) {
    if (t >= cap) return {x, t, static_cast<double>(y), cap, true};
    y = step_ld(map, y);
    ++t;
  }
  return {x, t, static_cast<double>(y), cap, false};
}

BruteSum brute_sum(const Summand& q, const PMMap& map, double z, long terms) {
  if (terms < 2) throw InvalidArgument("brute_sum: need at least two terms");
  double y = z, d = 1.0;
  cplx s{0.0}, last{0.0};
  double partial_abs = 0.0;
  for (long n = 0; n < terms; ++n) {
    last = q.eval(y, d, double(n));
    s += last;
    partial_abs += std::abs(last);
    y = map.eval_fb_inverse(y);
    d /= map.eval_fb_prime(y).real();
  }
  cplx tail{0.0};
  double bound = 0.0;
  if (q.decay) {
    const double p = q.decay->beta_bar(map.alpha()) - q.decay->delta;
    if (!(p > 1.0)) throw DomainError("brute_sum: summand is not summable");
    const double T = double(terms - 1);
    // sum_{n>T} r(n) ~ r(T) T^p int_{T+1/2}^inf n^{-p} dn
    tail = last * std::pow(T, p) * std::pow(T + 0.5, 1.0 - p) / (p - 1.0);
    bound = 0.01 * std::abs(tail);
  }
  bound += static_cast<double>(terms) * kEps * partial_abs;
  return {s + tail, bound, tail};
}

double BinDensity::operator()(double x) const {
  const double w = (q - p) / double(density.size());
  const auto i = static_cast<std::size_t>(std::clamp((x - p) / w, 0.0, double(density.size() - 1)));
  return density[i];
}

double BinDensity::l1_distance(const std::function<double(double)>& f) const {
  std::vector<double> gx, gw;
  gauss_legendre(12, gx, gw);
  const double w = (q - p) / double(density.size());
  double s = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double c = p + w * (double(i) + 0.5);
    for (std::size_t k = 0; k < gx.size(); ++k) s += 0.5 * w * gw[k] * std::abs(density[i] - f(c + 0.5 * w * gx[k]));
  }
  return s;
}

BinDensity ulam(const std::vector<GoodBranch>& branches, double p, double q, std::size_t bins) {
  if (bins < 16) throw InvalidArgument("ulam: need at least 16 bins");
  const double width = (q - p) / double(bins);
  std::vector<std::vector<double>> P(bins, std::vector<double>(bins, 0.0));
  for (const GoodBranch& b : branches)
    for (std::size_t k = 0; k < bins; ++k)
      deposit(b.eval(p + width * double(k)).real(), b.eval(p + width * double(k + 1)).real(), p, width, bins, k, P);
  return power_iterate(P, p, q);
}

BinDensity ulam_induced(const AbelFunction& af, const BoundConstants& bc, std::size_t bins) {
  if (bins < 16) throw InvalidArgument("ulam_induced: need at least 16 bins");
  const PMMap& map = af.map();
  const double p = map.a(), q = 1.0;
  const double width = (q - p) / double(bins);
  std::vector<std::vector<double>> P(bins, std::vector<double>(bins, 0.0));
  std::vector<double> edges(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) edges[k] = p + width * double(k);
  edges[bins] = 1.0;

  for (const GoodBranch& b : map.branches()) {
    const double v0 = b.eval(0.0).real();
    const auto bin_of = [&](double y) {
      return static_cast<std::size_t>(std::clamp((y - p) / width, 0.0, double(bins - 1)));
    };
    // Explicit cylinders until the rest fits in the bin of v(0).
    std::vector<double> x = edges;
    std::vector<double> head(bins + 1, 0.0);  // sum_{n<n0} v(x_n(e)) - v(0)
    std::size_t n = 0;
    for (;; ++n) {
      const double reach = b.eval(x[bins]).real();
      if (n > 0 && bin_of(reach) == bin_of(v0) && bin_of(v0 + 0.5 * (reach - v0)) == bin_of(v0)) break;
      for (std::size_t k = 0; k < bins; ++k)
        deposit(b.eval(x[k]).real(), b.eval(x[k + 1]).real(), p, width, bins, k, P);
      for (std::size_t k = 0; k <= bins; ++k) {
        head[k] += b.eval(x[k]).real() - v0;
        x[k] = map.eval_fb_inverse(x[k]);
      }
    }
    // Remaining cylinders: total length landing in bin k from the orbit sum.
    Summand qv{[&](cplx y, cplx, cplx) { return b.eval(y) - v0; }, {}, false};
    std::vector<double> tail(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k)
      tail[k] = euler_maclaurin_sum(qv, af, bc, edges[k]).value.real() - head[k];
    const std::size_t i0 = bin_of(v0);
    for (std::size_t k = 0; k < bins; ++k) P[i0][k] += std::abs(tail[k + 1] - tail[k]) / width;
  }
  return power_iterate(P, p, q);
}

MCEstimate birkhoff_average(const PMMap& map, const Observable& obs, std::uint64_t steps, std::uint64_t seed) {
  if (steps < 10000) throw InvalidArgument("birkhoff_average: need at least 1e4 steps");
  std::mt19937_64 rng(seed);
  double x = draw_seed(rng);
  const std::uint64_t burn = steps / 100;
  for (std::uint64_t i = 0; i < burn; ++i) {
    x = map.eval_f(x);
    if (x == 0.0) x = draw_seed(rng);
  }
  const std::uint64_t batches = 100, len = (steps - burn) / batches;
  std::vector<double> means;
  for (std::uint64_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::uint64_t i = 0; i < len; ++i) {
      s += obs.eval(x).real();
      x = map.eval_f(x);
      if (x == 0.0) x = draw_seed(rng);
    }
    means.push_back(s / double(len));
  }
  double m = 0.0;
  for (double v : means) m += v;
  return {m / double(batches), stderr_of(means), seed};
}

MCEstimate birkhoff_return_time(const PMMap& map, std::uint64_t steps, std::uint64_t seed) {
  if (steps < 10000) throw InvalidArgument("birkhoff_return_time: need at least 1e4 steps");
  std::mt19937_64 rng(seed);
  double x = draw_seed(rng);
  while (x < map.a()) x = map.eval_f(x);
  const std::uint64_t batches = 100, len = steps / batches;
  std::vector<double> means;
  double total_tau = 0.0, total_returns = 0.0;
  for (std::uint64_t b = 0; b < batches; ++b) {
    double returns = 0.0;
    for (std::uint64_t i = 0; i < len; ++i) {
      x = map.eval_f(x);
      if (x == 0.0) x = draw_seed(rng);
      if (x >= map.a()) returns += 1.0;
    }
    means.push_back(returns > 0 ? double(len) / returns : double(len));
    total_tau += double(len);
    total_returns += returns;
  }
  return {total_tau / std::max(total_returns, 1.0), stderr_of(means), seed};
}

MCEstimate monte_carlo_sigma2(const PMMap& map, const Observable& obs, std::uint64_t samples, std::uint64_t block,
                              std::uint64_t seed, unsigned orbits, unsigned jobs) {
  if (!(map.alpha() < 0.5)) throw DomainError("monte_carlo_sigma2: requires alpha < 1/2");
  if (samples < 100000) throw InvalidArgument("monte_carlo_sigma2: need at least 1e5 samples");
  const std::uint64_t per = samples / orbits;
  const std::uint64_t nblocks = per / block;
  if (nblocks < 2) throw InvalidArgument("monte_carlo_sigma2: too few blocks per orbit");
  std::vector<std::vector<double>> sums(orbits);
  parallel_for(orbits, jobs, [&](std::size_t o) {
    std::mt19937_64 rng(seed + o);
    double x = draw_seed(rng);
    for (std::uint64_t i = 0; i < 10000; ++i) x = map.eval_f(x);
    for (std::uint64_t b = 0; b < nblocks; ++b) {
      double s = 0.0;
      for (std::uint64_t i = 0; i < block; ++i) {
        s += obs.eval(x).real();
        x = map.eval_f(x);
        if (x == 0.0) x = draw_seed(rng);
      }
      sums[o].push_back(s);
    }
  });
  double tot = 0.0, count = 0.0;
  for (const auto& v : sums)
    for (double s : v) {
      tot += s;
      count += 1.0;
    }
  const double mean_block = tot / count;
  std::vector<double> sq;
  for (const auto& v : sums)
    for (double s : v) sq.push_back((s - mean_block) * (s - mean_block) / double(block));
  double m = 0.0;
  for (double v : sq) m += v;
  m /= double(sq.size());
  return {m * count / (count - 1.0), stderr_of(sq), seed};
}

} // namespace intermap
