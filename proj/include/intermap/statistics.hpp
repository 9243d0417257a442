#ifndef INTERMAP_STATISTICS_HPP
#define INTERMAP_STATISTICS_HPP

#include <functional>
#include <memory>
#include <string>

#include "intermap/galerkin.hpp"

namespace intermap {

/// Analytic observable on a neighbourhood of [0,1], real on [0,1].
struct Observable {
  std::function<cplx(cplx)> eval;
  std::string label;
};

struct StatisticsOptions {
  std::size_t N = 128;
  EMParams em{};
  AbelOptions abel{};
  unsigned jobs = 1;
};

/// Everything derived from one map: Abel function, bound constants, the
/// factorised induced operator and its acim.
struct StatisticsContext {
  std::shared_ptr<const PMMap> map;
  std::shared_ptr<const AbelFunction> af;
  BoundConstants bc;
  std::shared_ptr<const OperatorMatrix> matrix;
  ChebSolution acim;
  EMParams em;
  unsigned jobs = 1;
};

StatisticsContext make_context(std::shared_ptr<const PMMap> map, const StatisticsOptions& opts = {});
StatisticsContext make_context(const PMMap& map, const StatisticsOptions& opts = {});

struct StatResult {
  double value;
  double err_estimate;
  /// False when a normalised quantity was requested in the infinite-measure
  /// regime and the unnormalised value is returned instead.
  bool normalized = true;
};

/// rho_ind(psi(tau)). `psi_degree` is the polynomial growth of psi, used to
/// reject divergent expectations.
StatResult return_time_expectation(const StatisticsContext& ctx, const std::function<cplx(cplx)>& psi,
                                   double psi_degree);
StatResult mean_return_time(const StatisticsContext& ctx);

/// Density of the invariant measure whose restriction to [a,1] is rho_ind.
/// With `normalize` it is divided by the mean return time (alpha < 1 only).
double full_density(const StatisticsContext& ctx, double x, bool normalize = false);
/// int_0^1 obs rho for the unnormalised full density.
StatResult integrate_full_density(const StatisticsContext& ctx, const Observable& obs);
/// Normalised average of obs (alpha < 1); unnormalised with a flag otherwise.
StatResult observable_average(const StatisticsContext& ctx, const Observable& obs);

/// Diffusion coefficient of obs by the induced Green-Kubo formula (alpha < 1/2).
StatResult diffusion_coefficient(const StatisticsContext& ctx, const Observable& obs);

} // namespace intermap

#endif
