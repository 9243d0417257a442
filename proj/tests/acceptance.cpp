// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// argv[1] is the path of the intermap executable.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>

#include "intermap/bounds.hpp"
#include "intermap/io.hpp"
#include "intermap/oracle.hpp"
#include "intermap/statistics.hpp"

using namespace intermap;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail) {
  std::printf("%s  %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const std::array<double, 5> kAlphas{0.25, 0.5, 0.8, 0.95, 1.5};

StatisticsContext context(double alpha, std::size_t N) {
  StatisticsOptions o;
  o.N = N;
  return make_context(lsv(alpha), o);
}

// 1. golden mean return time through the command-line front end
void golden(const std::string& exe) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cmd = exe + " stats return-time --alpha 0.95 --N 256 --rho 4";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string text;
  if (pipe) {
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe.get())) text.append(buf, n);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double value = NAN;
  try {
    value = json::parse(text).at("value").get<double>();
  } catch (const std::exception&) {
  }
  const double exact = 14.0733232200019395;
  const double rel = std::abs(value - exact) / exact;
  report(1, "golden return time", rel <= 1e-9 && secs < 600.0,
         fmt("value %.16g rel err %.2e in %.1f s", value, rel, secs));
}

// 2. functional equation on log-spaced points of the bad branch
void functional_equation() {
  double worst = 0.0;
  for (double alpha : kAlphas) {
    const AbelFunction af = make_abel_function(lsv(alpha));
    const double lo = std::pow(1e-3, 1.0 / alpha), hi = 0.5;
    for (int i = 0; i < 1000; ++i) {
      const double x = lo * std::pow(hi / lo, i / 999.0);
      worst = std::max(worst, std::abs(af.eval(af.map().eval_fb(x).real()) - af.eval(x) + 1.0));
    }
  }
  report(2, "Abel functional equation", worst < 1e-11, fmt("max residual %.2e (tol 1e-11)", worst));
}

// 3. closed-form return time and induced map against direct iteration
void induced_closed_form() {
  long mismatches = 0, excluded = 0;
  double worst = 0.0;
  for (double alpha : kAlphas) {
    const AbelFunction af = make_abel_function(lsv(alpha));
    const PMMap& m = af.map();
    std::mt19937_64 rng(1000 + std::uint64_t(alpha * 100));
    std::uniform_real_distribution<double> u(m.a(), 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      const double fg = m.eval_fg(x);
      if (fg < m.a()) {
        const double y = af.eval(fg);
        if (std::abs(y - std::round(y)) < 1e-9) {
          ++excluded;
          continue;
        }
      }
      const OrbitSample o = iterate_return(m, x);
      if (return_time(af, x) != o.tau) ++mismatches;
      worst = std::max(worst, std::abs(induced_map(af, x) - o.endpoint));
    }
  }
  report(3, "induced map closed form", mismatches == 0 && worst < 1e-9,
         fmt("tau mismatches %.0f, endpoint err %.2e, guard-band exclusions %.0f", double(mismatches), worst,
             double(excluded)));
}

// 4. Euler-Maclaurin against a million-term brute-force sum
void em_vs_brute() {
  const StatisticsContext c = context(0.8, 128);
  const PMMap& m = *c.map;
  const ChebSolution& rho = c.acim;
  Summand q{[&](cplx x, cplx d, cplx) { return d * good_transfer(m, rho, x); }, Decay{1.0, 0.0, 1.0, 0.0}, true};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(m.a(), 1.0);
  double worst = 0.0, worst_diff = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double z = u(rng);
    const EMResult em = euler_maclaurin_sum(q, *c.af, c.bc, z, c.em);
    const BruteSum b = brute_sum(q, m, z, 1000000);
    const double diff = std::abs(em.value - b.value);
    worst = std::max(worst, diff / std::max(1e-10, em.err_estimate + b.tail_bound));
    worst_diff = std::max(worst_diff, diff);
  }
  report(4, "Euler-Maclaurin vs brute force", worst <= 1.0,
         fmt("max |EM - brute| %.2e, max ratio to tolerance %.2e", worst_diff, worst));
}

// 5. spectral solver: fixed point, self-convergence, doubling map
void spectral() {
  const StatisticsContext c = context(0.8, 128);
  double res = 0.0;
  for (double x : c.acim.basis.nodes())
    res = std::max(res, std::abs(induced_transfer_pointwise(*c.af, c.bc, c.acim, x, c.em).value - c.acim(x)));
  const ChebSolution r2 = solve_acim(build_matrix(*c.af, c.bc, 256, c.em));
  double self = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double x = 0.5 + 0.5 * (i + 0.37) / 10.0;
    self = std::max(self, std::abs(r2(x) - c.acim(x)));
  }
  const std::vector<GoodBranch> dbl{GoodBranch::make_affine(0.5, 0.0), GoodBranch::make_affine(0.5, 0.5)};
  const ChebSolution one = solve_acim(build_matrix(dbl, 0.0, 1.0, 16));
  double dev = 0.0;
  for (int i = 0; i <= 20; ++i) dev = std::max(dev, std::abs(one(i / 20.0) - 1.0));
  report(5, "spectral solver", res < 1e-9 && self < 1e-9 && dev < 1e-12,
         fmt("fixed-point residual %.2e, N->2N change %.2e, doubling dev %.2e", res, self, dev));
}

// 6. Kac: total mass of the full density equals the mean return time
void kac() {
  double worst = 0.0;
  for (double alpha : {0.5, 0.8}) {
    const StatisticsContext c = context(alpha, 128);
    const double mass = integrate_full_density(c, {[](cplx) { return cplx{1.0}; }, "1"}).value;
    worst = std::max(worst, std::abs(mass - mean_return_time(c).value));
  }
  report(6, "Kac consistency", worst < 1e-6, fmt("max |int rho - E tau| %.2e (tol 1e-6)", worst));
}

// 7. restriction of the full density to [a,1]
void restriction() {
  const StatisticsContext c = context(0.8, 128);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = 0.5 + 0.5 * i / 99.0;
    worst = std::max(worst, std::abs(full_density(c, x) - c.acim(x)));
  }
  report(7, "restriction property", worst < 1e-9, fmt("max |rho - rho_ind| %.2e (tol 1e-9)", worst));
}

// 8. log-log slope of the density near the neutral point
void exponent() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 0.8, 1.5}) {
    const StatisticsContext c = context(alpha, 128);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = 31;
    for (int i = 0; i < n; ++i) {
      const double lx = std::log(1e-6) + (std::log(1e-3) - std::log(1e-6)) * i / (n - 1.0);
      const double ly = std::log(full_density(c, std::exp(lx)));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    ok = ok && std::abs(slope + alpha) <= 0.01;
    detail += fmt("a=%.2g: %.5f  ", alpha, slope);
  }
  report(8, "density exponent", ok, detail);
}

// 9. derivative sandwich and shift inequality on the region
void inequalities() {
  double lo = 1e300, hi = 0.0, shift = 0.0;
  for (double alpha : kAlphas) {
    const auto map = std::make_shared<const PMMap>(lsv(alpha));
    const AbelFunction af = make_abel_function(map);
    const BoundConstants bc = lemma_constants(*map);
    for (cplx z : sample_region(bc.Z, 100, 9)) {
      const double d = abel_derivative_scaled(af, z) * bc.hhat1;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      cplx m{u(rng), u(rng)};
      if (std::abs(m) > 1.0) m /= std::abs(m);
      const double s = 1.0 / (1.0 / bc.Z + 2.0 * bc.hhat1 * std::abs(m));
      const cplx z0 = sample_region(s, 1, 500 + std::uint64_t(i))[0];
      shift = std::max(shift, abel_shift_defect(af, z0, m) / (2.0 * bc.hhat1 * std::abs(m)));
    }
  }
  report(9, "derivative and shift inequalities", lo >= 0.5 && hi <= 2.0 && shift <= 1.0,
         fmt("hhat1|z^2 A'| in [%.4f, %.4f], shift ratio %.4f", lo, hi, shift));
}

// 10. diffusion coefficient against Monte Carlo, and quadratic scaling
void diffusion() {
  const StatisticsContext c = context(0.25, 64);
  const Observable x{[](cplx z) { return z; }, "x"};
  const double s = diffusion_coefficient(c, x).value;
  const double s3 = diffusion_coefficient(c, {[](cplx z) { return 3.0 * z; }, "3x"}).value;
  const MCEstimate mc = monte_carlo_sigma2(*c.map, x, 10000000, 1000, 7);
  const double z = std::abs(s - mc.mean) / mc.stderr_;
  const double scale = std::abs(s3 / (9.0 * s) - 1.0);
  report(10, "diffusion coefficient", z <= 3.0 && scale < 1e-8,
         fmt("spectral %.10f, MC %.5f (%.2f stderr)", s, mc.mean, z) + fmt("; scaling err %.1e", scale));
}

// 11. method comparison
void methods() {
  const StatisticsContext c = context(0.5, 64);
  const ChebSolution r2 = solve_acim(build_matrix(*c.af, c.bc, 128, c.em));
  double self = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double x = 0.5 + 0.5 * (i + 0.37) / 10.0;
    self = std::max(self, std::abs(r2(x) - c.acim(x)));
  }
  const BinDensity u = ulam_induced(*c.af, c.bc, 1024);
  const double ulam_l1 = u.l1_distance([&](double x) { return r2(x); });
  const double et = mean_return_time(context(0.95, 128)).value;
  const MCEstimate b = birkhoff_return_time(lsv(0.95), 100000000, 1);
  const double bias = std::abs(b.mean - et) / et;
  report(11, "method comparison", self < 1e-8 && ulam_l1 > 1e-4 && bias > 0.1,
         fmt("Chebyshev self-conv %.2e; Ulam L1 %.2e (need > 1e-4)", self, ulam_l1) +
             fmt("; Birkhoff E tau %.4f vs %.4f, bias %.0f%%", b.mean, et, 100.0 * bias));
}

} // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "intermap";
  const auto guarded = [](int id, auto fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, "exception", false, e.what());
    }
  };
  guarded(1, [&] { golden(exe); });
  guarded(2, functional_equation);
  guarded(3, induced_closed_form);
  guarded(4, em_vs_brute);
  guarded(5, spectral);
  guarded(6, kac);
  guarded(7, restriction);
  guarded(8, exponent);
  guarded(9, inequalities);
  guarded(10, diffusion);
  guarded(11, methods);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
