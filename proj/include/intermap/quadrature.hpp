#ifndef INTERMAP_QUADRATURE_HPP
#define INTERMAP_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "intermap/types.hpp"

namespace intermap {

/// Bernoulli number B_{2k}, k >= 1, from the zeta-function identity.
double bernoulli_even(int k);

/// Node of a rule on the unit interval. `s` is the abscissa, `one_minus_s`
/// its complement, both computed without cancellation so endpoint
/// singularities can be resolved down to ~1e-300.
struct UnitNode {
  double s;
  double one_minus_s;
  double w;
};

/// Tanh-sinh (double exponential) rule on (0,1) with step h. Nodes are kept
/// while both s and 1-s exceed `s_min`.
std::vector<UnitNode> tanh_sinh_unit(double h, double s_min = 1e-300);
/// Step giving roughly `points` nodes for the default truncation.
double tanh_sinh_step_for(std::size_t points, double s_min = 1e-300);

struct QuadResult {
  double value;
  double err_estimate;
  std::size_t evaluations;
};

/// Integrates f over (lo, hi) by tanh-sinh, halving the step from the one
/// matching `initial_points` until successive estimates agree to `rel_tol`
/// (or `max_doublings` is exhausted, in which case ConvergenceError).
QuadResult tanh_sinh(const std::function<double(double)>& f, double lo, double hi,
                     double rel_tol = 1e-13, std::size_t initial_points = 64,
                     int max_doublings = 3, double s_min = 1e-300);

/// Clenshaw-Curtis nodes and weights (n+1 points) on [lo,hi].
void clenshaw_curtis(std::size_t n, double lo, double hi, std::vector<double>& nodes,
                     std::vector<double>& weights);

/// Clenshaw-Curtis with doubling n until successive estimates agree.
QuadResult clenshaw_curtis_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double rel_tol = 1e-13, std::size_t n0 = 32,
                                    std::size_t n_max = 512);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace intermap

#endif
