#include "intermap/statistics.hpp"

#include <array>
#include <cmath>

#include "intermap/parallel.hpp"
#include "intermap/quadrature.hpp"

namespace intermap {

namespace {

constexpr double kRelTol = 1e-12;

cplx branch_deriv(const GoodBranch& b, cplx x) {
  const cplx dv = b.deriv(x);
  return x.imag() == 0.0 ? cplx{std::abs(dv.real())} : dv;
}

// Clenshaw-Curtis on [lo,hi] for an M-vector of integrands, doubling n until
// every component agrees to rel_tol (relative to the largest component).
template <std::size_t M>
std::pair<std::array<double, M>, double> cc_vector(const std::function<std::array<double, M>(double)>& f,
                                                   double lo, double hi, unsigned jobs, double rel_tol,
                                                   std::size_t n0 = 16, std::size_t n_max = 256) {
  std::array<double, M> prev{};
  bool have_prev = false;
  for (std::size_t n = n0; n <= n_max; n *= 2) {
    std::vector<double> x, w;
    clenshaw_curtis(n, lo, hi, x, w);
    std::vector<std::array<double, M>> vals(x.size());
    parallel_for(x.size(), jobs, [&](std::size_t i) { vals[i] = f(x[i]); });
    std::array<double, M> cur{};
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t m = 0; m < M; ++m) cur[m] += w[i] * vals[i][m];
    if (have_prev) {
      double diff = 0.0, scale = 0.0;
      for (std::size_t m = 0; m < M; ++m) {
        diff = std::max(diff, std::abs(cur[m] - prev[m]));
        scale = std::max(scale, std::abs(cur[m]));
      }
      if (diff <= rel_tol * std::max(scale, 1e-300)) return {cur, diff};
    }
    prev = cur;
    have_prev = true;
  }
  throw ConvergenceError("Clenshaw-Curtis: no convergence up to the node cap");
}


} // namespace

StatisticsContext make_context(std::shared_ptr<const PMMap> map, const StatisticsOptions& opts) {
  auto af = std::make_shared<const AbelFunction>(make_abel_function(map, opts.abel));
  const BoundConstants bc = lemma_constants(*map);
  auto matrix = std::make_shared<const OperatorMatrix>(build_matrix(*af, bc, opts.N, opts.em, opts.jobs));
  ChebSolution acim = solve_acim(*matrix);
  return StatisticsContext{std::move(map), std::move(af), bc, std::move(matrix), std::move(acim), opts.em, opts.jobs};
}

StatisticsContext make_context(const PMMap& map, const StatisticsOptions& opts) {
  return make_context(std::make_shared<const PMMap>(map), opts);
}

StatResult return_time_expectation(const StatisticsContext& ctx, const std::function<cplx(cplx)>& psi,
                                   double psi_degree) {
  const double alpha = ctx.map->alpha();
  if (!((1.0 + alpha) / alpha > 1.0 + psi_degree))
    throw DomainError("return_time_expectation: expectation diverges for this growth degree");
  const PMMap& map = *ctx.map;
  const ChebSolution& rho = ctx.acim;
  Summand q{[&](cplx x, cplx d, cplx n) { return psi(n + 1.0) * d * good_transfer(map, rho, x); }, {}, true};
  std::function<std::array<double, 2>(double)> f = [&](double z) -> std::array<double, 2> {
    const OrbitRule rule(*ctx.af, ctx.bc, z, ctx.em);
    return {rule.apply(q).real(), rule.apply(q, rule.K() + 1).real()};
  };
  auto [v, err] = cc_vector<2>(f, map.a(), 1.0, ctx.jobs, kRelTol);
  return {v[0], err + std::abs(v[0] - v[1])};
}

StatResult mean_return_time(const StatisticsContext& ctx) {
  return return_time_expectation(ctx, [](cplx n) { return n; }, 1.0);
}

double full_density(const StatisticsContext& ctx, double x, bool normalize) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("full_density: x must lie in (0,1]");
  const PMMap& map = *ctx.map;
  const ChebSolution& rho = ctx.acim;
  Summand q{[&](cplx y, cplx d, cplx) { return d * good_transfer(map, rho, y); }, {}, true};
  const double v = OrbitRule(*ctx.af, ctx.bc, x, ctx.em).apply(q).real();
  if (!normalize) return v;
  if (map.alpha() >= 1.0) throw DomainError("full_density: no normalisation in the infinite-measure regime");
  return v / mean_return_time(ctx).value;
}

StatResult integrate_full_density(const StatisticsContext& ctx, const Observable& obs) {
  const PMMap& map = *ctx.map;
  if (map.alpha() >= 1.0 && std::abs(obs.eval(0.0)) > 0.0)
    throw DomainError("integrate_full_density: integral diverges for alpha >= 1");
  auto near = [&](double x) { return (obs.eval(x) * full_density(ctx, x)).real(); };
  const QuadResult lower = tanh_sinh(near, 0.0, map.a(), 1e-10, 64, 4);
  auto upper_f = [&](double x) { return (obs.eval(x) * ctx.acim(x)).real(); };
  const QuadResult upper = clenshaw_curtis_adaptive(upper_f, map.a(), 1.0, 1e-14, 32, 1024);
  return {lower.value + upper.value, lower.err_estimate + upper.err_estimate, false};
}

StatResult observable_average(const StatisticsContext& ctx, const Observable& obs) {
  StatResult r = integrate_full_density(ctx, obs);
  if (ctx.map->alpha() >= 1.0) return r;
  const StatResult t = mean_return_time(ctx);
  return {r.value / t.value, r.err_estimate / t.value + std::abs(r.value) * t.err_estimate / (t.value * t.value),
          true};
}

StatResult diffusion_coefficient(const StatisticsContext& ctx, const Observable& obs) {
  const PMMap& map = *ctx.map;
  const AbelFunction& af = *ctx.af;
  if (!(map.alpha() < 0.5)) throw DomainError("diffusion_coefficient: requires alpha < 1/2");
  const double mu = observable_average(ctx, obs).value;
  const StatResult tau = mean_return_time(ctx);
  auto centred = [&](cplx x) { return obs.eval(x) - mu; };
  const cplx c0 = centred(0.0);

  // H(x) = sum_{i>=1} [psi(x_i) - psi(0)] - psi(0) A(x), so that
  // sum_{i=1}^n psi(x_i) = H(z) - H(x_n) along the backward orbit of z.
  EMParams inner = ctx.em;
  inner.tail_points = 64;
  inner.quad_points = 32;
  Summand qh{[&](cplx x, cplx, cplx) { return centred(x) - c0; }, {}, false};
  auto H = [&](cplx x) {
    const OrbitRule r(af, ctx.bc, x, inner);
    return r.apply(qh) - (centred(x) - c0) - c0 * af.eval(x);
  };

  const auto& branches = map.branches();
  // Per rule node and branch: weight wd * v'(x), the point v(x) and Phi.
  struct Term {
    cplx w;
    cplx y;
    cplx phi;
  };
  auto terms_at = [&](double z) {
    const OrbitRule rule(af, ctx.bc, z, ctx.em);
    const auto& nodes = rule.nodes();
    const std::size_t head = rule.n_star() + 1;
    const cplx Hz = H(z);
    std::vector<Term> out;
    out.reserve(nodes.size() * branches.size());
    cplx prefix{0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const OrbitNode& nd = nodes[i];
      if (i > 0 && i < head) prefix += centred(nd.x);
      if (nd.wd == cplx{0.0}) continue;
      const cplx p = i < head ? prefix : Hz - H(nd.x);
      for (const GoodBranch& b : branches) {
        const cplx y = b.eval(nd.x);
        out.push_back({nd.wd * branch_deriv(b, nd.x), y, centred(y) + p});
      }
    }
    return out;
  };

  // L(Phi rho_ind) at the nodes, then Y = S L(Phi rho_ind).
  const ChebBasis& basis = ctx.matrix->basis();
  std::vector<double> lg(basis.size());
  parallel_for(basis.size(), ctx.jobs, [&](std::size_t j) {
    cplx s{0.0};
    for (const Term& t : terms_at(basis.nodes()[j])) s += t.w * ctx.acim(t.y) * t.phi;
    lg[j] = s.real();
  });
  const ChebSolution Y = solution_apply(*ctx.matrix, ChebSolution{basis, basis.values_to_coeffs(lg)});

  std::function<std::array<double, 2>(double)> f = [&](double z) -> std::array<double, 2> {
    cplx s1{0.0}, s2{0.0};
    for (const Term& t : terms_at(z)) {
      s1 += t.w * ctx.acim(t.y) * t.phi * t.phi;
      s2 += t.w * Y(t.y) * t.phi;
    }
    return {s1.real(), s2.real()};
  };
  auto [v, err] = cc_vector<2>(f, map.a(), 1.0, 1, 1e-10);
  const double sigma_f = v[0] + 2.0 * v[1];
  return {sigma_f / tau.value, 3.0 * err / tau.value + std::abs(sigma_f) * tau.err_estimate / (tau.value * tau.value)};
}

} // namespace intermap
