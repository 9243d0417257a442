#ifndef INTERMAP_ORACLE_HPP
#define INTERMAP_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "intermap/chebyshev.hpp"
#include "intermap/statistics.hpp"

namespace intermap {

/// Slow reference implementations. Apart from ulam_induced (whose tail
/// cylinders are summed with the orbit-sum machinery), nothing here touches
/// the Abel function.

struct OrbitSample {
  double x0;
  long long tau;
  double endpoint;
  long long orbit_cap;
  bool capped;
};

OrbitSample iterate_return(const PMMap& map, double x, long long cap = 1000000000LL);

struct BruteSum {
  cplx value;
  double tail_bound;
  cplx tail_estimate;
};

/// sum_{n<terms} Q(f_b^{-n}z, (f_b^{-n})'(z), n) by Newton backward
/// iteration, plus a power-law estimate of the remaining tail from the decay
/// metadata (included in `value`).
BruteSum brute_sum(const Summand& q, const PMMap& map, double z, long terms);

/// Piecewise-constant density on equal bins of [p,q].
struct BinDensity {
  double p, q;
  std::vector<double> density;

  double operator()(double x) const;
  /// int_p^q |this - f|.
  double l1_distance(const std::function<double(double)>& f) const;
};

/// Ulam approximation of the induced acim with `bins` equal bins of [a,1].
BinDensity ulam_induced(const AbelFunction& af, const BoundConstants& bc, std::size_t bins);
/// Ulam approximation for a full-branch family on [p,q].
BinDensity ulam(const std::vector<GoodBranch>& branches, double p, double q, std::size_t bins);

struct MCEstimate {
  double mean;
  double stderr_;
  std::uint64_t seed;
};

/// Time average of obs along one orbit of the full map (mt19937_64 seeded
/// with `seed`), 1% burn-in, standard error from 100 batch means.
MCEstimate birkhoff_average(const PMMap& map, const Observable& obs, std::uint64_t steps, std::uint64_t seed);
/// Mean of tau over the successive returns to [a,1] of one long orbit.
MCEstimate birkhoff_return_time(const PMMap& map, std::uint64_t steps, std::uint64_t seed);

/// Variance of normalised block sums of the centred observable over
/// `orbits` independent orbits, stream i seeded with seed + i.
MCEstimate monte_carlo_sigma2(const PMMap& map, const Observable& obs, std::uint64_t samples,
                              std::uint64_t block, std::uint64_t seed, unsigned orbits = 10, unsigned jobs = 1);

} // namespace intermap

#endif
