#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "intermap/bounds.hpp"
#include "intermap/induced.hpp"
#include "intermap/io.hpp"
#include "intermap/oracle.hpp"
#include "intermap/statistics.hpp"

using namespace intermap;

namespace {

constexpr const char* kVersion = "intermap 1.0.0";


struct Settings {
  std::string map = "lsv";
  double alpha = 0.8;
  std::size_t N = 128;
  std::size_t abel_N = 24;
  double rho = 4.0;
  int K = -1;
  std::size_t quad_points = 64;
  unsigned jobs = 1;
  std::uint64_t seed = 7;
  std::string obs = "0,1";
  std::string out;

  json to_json() const {
    return {{"map", map}, {"alpha", alpha}, {"N", N}, {"abel_N", abel_N},
            {"em", {{"rho", rho}, {"K", K}, {"quad_points", quad_points}}},
            {"seed", seed}, {"obs", obs}};
  }
};

void add_common(CLI::App* app, Settings& s) {
  app->add_option("--map", s.map, "'lsv' or a JSON map specification file")->capture_default_str();
  app->add_option("--alpha", s.alpha, "LSV exponent")->capture_default_str();
  app->add_option("--N", s.N, "Chebyshev modes")->capture_default_str()->check(CLI::Range(4, 4096));
  app->add_option("--abel-N", s.abel_N, "Abel expansion order")->capture_default_str()->check(CLI::Range(2, 29));
  app->add_option("--rho", s.rho, "Euler-Maclaurin contour parameter")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--K", s.K, "Bernoulli correction terms, -1 for automatic")->capture_default_str();
  app->add_option("--quad-points", s.quad_points, "contour nodes")->capture_default_str()->check(CLI::Range(8, 4096));
  app->add_option("--jobs", s.jobs, "worker threads")->capture_default_str()->check(CLI::Range(1, 256));
  app->add_option("--seed", s.seed, "random seed")->capture_default_str();
  app->add_option("--obs", s.obs, "observable as polynomial coefficients c0,c1,...")->capture_default_str();
  app->add_option("-o,--out", s.out, "output file (default stdout)");
}

std::shared_ptr<const PMMap> load_map(const Settings& s) {
  if (s.map == "lsv") return std::make_shared<const PMMap>(lsv(s.alpha));
  std::ifstream in(s.map);
  if (!in) throw InvalidArgument("--map: cannot open '" + s.map + "'");
  return std::make_shared<const PMMap>(map_from_json(json::parse(in)));
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(what + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidArgument(what + ": empty list");
  return out;
}

Observable make_observable(const std::string& spec) {
  const std::vector<double> c = parse_list(spec, "--obs");
  return {[c](cplx x) {
            cplx s{0.0};
            for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
            return s;
          },
          "poly[" + spec + "]"};
}

StatisticsOptions stat_options(const Settings& s) {
  StatisticsOptions o;
  o.N = s.N;
  o.em.rho = s.rho;
  o.em.K = s.K;
  o.em.quad_points = s.quad_points;
  o.abel.N = s.abel_N;
  o.jobs = s.jobs;
  return o;
}

json provenance(const Settings& s, const std::string& command) {
  json cfg = s.to_json();
  cfg["command"] = command;
  return {{"config_hash", fnv1a_hex(dump17(cfg, 0))}, {"seed", s.seed}, {"version", kVersion}};
}

void emit(const Settings& s, const std::string& text) {
  if (s.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(s.out);
  if (!f) throw InvalidArgument("--out: cannot write '" + s.out + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string num(double x) { return dump17(json(x)); }

std::vector<double> grid_points(double lo, double hi, std::size_t n, bool log_spaced) {
  std::vector<double> g;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : double(i) / double(n - 1);
    g.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
  }
  return g;
}

json scalar(const Settings& s, const PMMap& m, const std::string& quantity, const StatResult& r) {
  return {{"quantity", quantity}, {"alpha", m.alpha()}, {"N", s.N}, {"rho", s.rho},
          {"K", EMParams{s.rho, s.K}.effective_K()}, {"value", r.value}, {"err_estimate", r.err_estimate},
          {"normalized", r.normalized}};
}

// Validation suites. Each appends {name, pass, value, tolerance} records.

struct Check {
  std::string name;
  bool pass;
  double value;
  double tolerance;
  std::string note;
};

json to_json(const Check& c) {
  json j{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

std::vector<Check> suite_abel(const AbelFunction& af, const BoundConstants& bc) {
  const PMMap& m = af.map();
  double worst = 0.0, mono = -std::numeric_limits<double>::infinity(), round = 0.0;
  const double lo = std::pow(1e-3, 1.0 / m.alpha());
  double prev = af.eval(lo * 0.999);
  for (double x : grid_points(lo, m.a(), 1000, true)) {
    worst = std::max(worst, std::abs(af.eval(m.eval_fb(x).real()) - af.eval(x) + 1.0));
    const double ax = af.eval(x);
    mono = std::max(mono, ax - prev);
    prev = ax;
    round = std::max(round, std::abs(af.eval_inverse(ax) - x) / x);
  }
  double lo_d = 1e300, hi_d = 0.0, shift = 0.0;
  for (cplx z : sample_region(bc.Z, 100, 11)) {
    const double d = abel_derivative_scaled(af, z) * bc.hhat1;
    lo_d = std::min(lo_d, d);
    hi_d = std::max(hi_d, d);
  }
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int i = 0; i < 100; ++i) {
    const cplx mm{u(rng), u(rng)};
    const double s = 1.0 / (1.0 / bc.Z + 2.0 * bc.hhat1 * std::abs(mm));
    shift = std::max(shift, abel_shift_defect(af, sample_region(s, 1, 100 + std::uint64_t(i))[0], mm) /
                                (2.0 * bc.hhat1 * std::abs(mm)));
  }
  return {{"abel.functional_equation", worst < 1e-11, worst, 1e-11, ""},
          {"abel.decreasing", mono < 0.0, mono, 0.0, ""},
          {"abel.round_trip", round < 1e-11, round, 1e-11, "relative"},
          {"abel.derivative_sandwich", lo_d >= 0.5 && hi_d <= 2.0, hi_d, 2.0, "hhat1 |z^2 A'| range [" + num(lo_d) + ", " + num(hi_d) + "]"},
          {"abel.shift_inequality", shift <= 1.0, shift, 1.0, "ratio to 2 hhat1 |m|"}};
}

std::vector<Check> suite_induced(const AbelFunction& af, std::uint64_t seed) {
  const PMMap& m = af.map();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(m.a(), 1.0);
  long mismatches = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const OrbitSample o = iterate_return(m, x);
    if (return_time(af, x) != o.tau) ++mismatches;
    worst = std::max(worst, std::abs(induced_map(af, x) - o.endpoint));
  }
  return {{"induced.return_time", mismatches == 0, double(mismatches), 0.0, "mismatches over 1000 seeds"},
          {"induced.endpoint", worst < 1e-9, worst, 1e-9, ""}};
}

std::vector<Check> suite_em(const StatisticsContext& c, std::uint64_t seed) {
  const PMMap& m = *c.map;
  // transfer summand d (L_g rho_ind)(x): linear in d, decays like |d|
  const ChebSolution& rho = c.acim;
  Summand q{[&](cplx x, cplx d, cplx) { return d * good_transfer(m, rho, x); }, Decay{1.0, 0.0, 1.0, 0.0}, true};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(m.a(), 1.0);
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    const double z = u(rng);
    const EMResult em = euler_maclaurin_sum(q, *c.af, c.bc, z, c.em);
    const BruteSum b = brute_sum(q, m, z, 200000);
    const double diff = std::abs(em.value - b.value);
    const double tol = std::max(1e-10, em.err_estimate + b.tail_bound);
    ok = ok && diff <= tol;
    worst = std::max(worst, diff / tol);
  }
  return {{"em.brute_force", ok, worst, 1.0, "ratio |EM - brute| / tolerance"}};
}

std::vector<Check> suite_spectral(const StatisticsContext& c, const Settings& s) {
  const PMMap& m = *c.map;
  const double res = [&] {
    double r = 0.0;
    for (double x : c.acim.basis.nodes()) {
      r = std::max(r, std::abs(induced_transfer_pointwise(*c.af, c.bc, c.acim, x, c.em).value - c.acim(x)));
    }
    return r;
  }();
  StatisticsOptions o = stat_options(s);
  o.N = 2 * s.N;
  const OperatorMatrix M2 = build_matrix(*c.af, c.bc, o.N, c.em, c.jobs);
  const ChebSolution r2 = solve_acim(M2);
  double self = 0.0;
  for (double x : grid_points(m.a(), 1.0, 10, false)) self = std::max(self, std::abs(r2(x) - c.acim(x)));
  return {{"spectral.fixed_point", res < 1e-9, res, 1e-9, ""},
          {"spectral.self_convergence", self < 1e-9, self, 1e-9, "N vs 2N at 10 probes"},
          {"spectral.conditioning", !c.matrix->ill_conditioned(), c.matrix->rcond(), 1e-12, "rcond"}};
}

std::vector<Check> suite_density(const StatisticsContext& c) {
  const PMMap& m = *c.map;
  std::vector<Check> out;
  double restr = 0.0;
  for (double x : grid_points(m.a(), 1.0, 100, false)) restr = std::max(restr, std::abs(full_density(c, x) - c.acim(x)));
  out.push_back({"density.restriction", restr < 1e-9, restr, 1e-9, ""});
  std::vector<double> lx, ly;
  for (double x : grid_points(1e-6, 1e-3, 31, true)) {
    lx.push_back(std::log(x));
    ly.push_back(std::log(full_density(c, x)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(ly.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  out.push_back({"density.exponent", std::abs(slope + m.alpha()) <= 0.01, slope, 0.01, "log-log slope on [1e-6,1e-3]"});
  if (m.alpha() < 1.0) {
    const double kac = integrate_full_density(c, {[](cplx) { return cplx{1.0}; }, "1"}).value;
    const double et = mean_return_time(c).value;
    out.push_back({"density.kac", std::abs(kac - et) < 1e-6, std::abs(kac - et), 1e-6, ""});
  }
  return out;
}

std::vector<Check> suite_monte_carlo(const StatisticsContext& c, const Observable& obs, std::uint64_t seed) {
  const PMMap& m = *c.map;
  std::vector<Check> out;
  if (m.alpha() < 1.0) {
    const double avg = observable_average(c, obs).value;
    const MCEstimate b = birkhoff_average(m, obs, 10000000, seed);
    const double z = std::abs(avg - b.mean) / b.stderr_;
    out.push_back({"mc.birkhoff_average", z < 3.0, z, 3.0, "standard errors"});
  }
  if (m.alpha() < 0.5) {
    const double sig = diffusion_coefficient(c, obs).value;
    const MCEstimate mc = monte_carlo_sigma2(m, obs, 10000000, 1000, seed, 10, c.jobs);
    const double z = std::abs(sig - mc.mean) / mc.stderr_;
    out.push_back({"mc.diffusion", z < 3.0, z, 3.0, "standard errors"});
  }
  return out;
}

// json helpers for the config document

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw InvalidArgument(where + ": unknown key '" + k + "'");
}

int run_config(const std::string& path, unsigned jobs_override) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("run: cannot open '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  only_keys(cfg, {"map", "N", "abel_N", "em", "outputs", "grid", "seed", "out_dir", "obs", "jobs"}, "config");
  const auto field = [&](const char* k) -> const json& {
    if (!cfg.contains(k)) throw InvalidArgument(std::string("config: missing key '") + k + "'");
    return cfg.at(k);
  };
  const PMMap map_value = map_from_json(field("map"));
  auto map = std::make_shared<const PMMap>(map_value);
  Settings s;
  s.alpha = map->alpha();
  s.N = cfg.value("N", std::size_t{128});
  s.abel_N = cfg.value("abel_N", std::size_t{24});
  if (cfg.contains("em")) {
    only_keys(cfg["em"], {"rho", "K", "quad_points"}, "config.em");
    s.rho = cfg["em"].value("rho", 4.0);
    s.K = cfg["em"].value("K", -1);
    s.quad_points = cfg["em"].value("quad_points", std::size_t{64});
  }
  s.seed = cfg.value("seed", std::uint64_t{7});
  s.obs = cfg.value("obs", std::string("0,1"));
  s.jobs = jobs_override ? jobs_override : cfg.value("jobs", 1u);
  if (s.N < 4 || s.N > 4096) throw InvalidArgument("config.N: must lie in [4,4096]");
  if (s.abel_N < 2 || s.abel_N > 29) throw InvalidArgument("config.abel_N: must lie in [2,29]");
  if (!(s.rho > 0)) throw InvalidArgument("config.em.rho: must be positive");
  std::size_t grid_n = 200;
  bool grid_log = true;
  double grid_lo = 1e-6, grid_hi = 1.0;
  if (cfg.contains("grid")) {
    only_keys(cfg["grid"], {"points", "spacing", "lo", "hi"}, "config.grid");
    grid_n = cfg["grid"].value("points", grid_n);
    const std::string sp = cfg["grid"].value("spacing", std::string("log"));
    if (sp != "log" && sp != "linear") throw InvalidArgument("config.grid.spacing: 'log' or 'linear'");
    grid_log = sp == "log";
    grid_lo = cfg["grid"].value("lo", grid_lo);
    grid_hi = cfg["grid"].value("hi", grid_hi);
    if (!(grid_lo > 0 && grid_hi <= 1 && grid_lo < grid_hi)) throw InvalidArgument("config.grid: need 0 < lo < hi <= 1");
  }
  const std::filesystem::path out_dir = cfg.value("out_dir", std::string("."));
  std::filesystem::create_directories(out_dir);
  const std::set<std::string> known{"abel", "bounds", "acim", "matrix", "density", "return_time", "average", "diffusion"};
  std::vector<std::string> outputs = cfg.value("outputs", std::vector<std::string>{"density", "return_time"});
  for (const auto& o : outputs)
    if (!known.count(o)) throw InvalidArgument("config.outputs: unknown quantity '" + o + "'");

  const StatisticsContext c = make_context(map, stat_options(s));
  json prov{{"config_hash", fnv1a_hex(dump17(cfg, 0))}, {"seed", s.seed}, {"version", kVersion}};
  json results{{"provenance", prov}, {"scalars", json::array()}};
  const auto write_file = [&](const std::string& name, const std::string& text) {
    std::ofstream f(out_dir / name);
    if (!f) throw InvalidArgument("run: cannot write " + (out_dir / name).string());
    f << text << '\n';
  };
  const auto with_prov = [&](json j) {
    j["provenance"] = prov;
    return j;
  };
  const Observable obs = make_observable(s.obs);
  for (const auto& o : outputs) {
    if (o == "abel") write_file("abel.json", dump17(with_prov(expansion_to_json(c.af->expansion()))));
    else if (o == "bounds") write_file("bounds.json", dump17(with_prov(bounds_to_json(c.bc))));
    else if (o == "acim") write_file("acim.json", dump17(with_prov(solution_to_json(c.acim))));
    else if (o == "matrix") write_file("matrix.json", dump17(with_prov(matrix_to_json(*c.matrix))));
    else if (o == "density") {
      std::string csv = "# " + std::string(kVersion) + " config_hash=" + prov["config_hash"].get<std::string>() + "\nx,rho_ind,rho_full\n";
      for (double x : grid_points(grid_lo, grid_hi, grid_n, grid_log))
        csv += num(x) + "," + (x >= map->a() ? num(c.acim(x)) : std::string()) + "," + num(full_density(c, x)) + "\n";
      write_file("density.csv", csv.substr(0, csv.size() - 1));
    } else if (o == "return_time") results["scalars"].push_back(scalar(s, *map, "return_time", mean_return_time(c)));
    else if (o == "average") results["scalars"].push_back(scalar(s, *map, "average", observable_average(c, obs)));
    else if (o == "diffusion") results["scalars"].push_back(scalar(s, *map, "diffusion", diffusion_coefficient(c, obs)));
  }
  write_file("results.json", dump17(results));
  return 0;
}

int bench(const Settings& s, const std::string& n_list, const std::string& bins_list, const std::string& steps_list) {
  auto map = load_map(s);
  const auto now = [] { return std::chrono::steady_clock::now(); };
  const auto secs = [](auto t0, auto t1) { return std::chrono::duration<double>(t1 - t0).count(); };
  const AbelFunction af = make_abel_function(map);
  const BoundConstants bc = lemma_constants(*map);
  EMParams em{s.rho, s.K, s.quad_points};
  std::vector<double> Ns = parse_list(n_list, "--N-list");
  // reference density for the Ulam column
  const double nmax = *std::max_element(Ns.begin(), Ns.end());
  const ChebSolution ref = solve_acim(build_matrix(af, bc, std::size_t(2 * nmax), em, s.jobs));
  const auto probes = grid_points(map->a(), 1.0, 10, false);
  std::string csv = "# " + std::string(kVersion) + " config_hash=" + provenance(s, "bench")["config_hash"].get<std::string>() +
                    "\nmethod,size,error_proxy,wall_time\n";
  for (double n : Ns) {
    const auto t0 = now();
    const ChebSolution r = solve_acim(build_matrix(af, bc, std::size_t(n), em, s.jobs));
    const auto t1 = now();
    double e = 0.0;
    for (double x : probes) e = std::max(e, std::abs(r(x) - ref(x)));
    csv += "chebyshev," + std::to_string(std::size_t(n)) + "," + num(e) + "," + num(secs(t0, t1)) + "\n";
  }
  for (double b : parse_list(bins_list, "--bins-list")) {
    const auto t0 = now();
    const BinDensity u = ulam_induced(af, bc, std::size_t(b));
    const auto t1 = now();
    csv += "ulam," + std::to_string(std::size_t(b)) + "," + num(u.l1_distance([&](double x) { return ref(x); })) + "," +
           num(secs(t0, t1)) + "\n";
  }
  const Observable obs = make_observable(s.obs);
  for (double st : parse_list(steps_list, "--steps-list")) {
    const auto t0 = now();
    const MCEstimate e = birkhoff_average(*map, obs, std::uint64_t(st), s.seed);
    const auto t1 = now();
    csv += "birkhoff," + std::to_string(std::uint64_t(st)) + "," + num(e.stderr_) + "," + num(secs(t0, t1)) + "\n";
  }
  emit(s, csv);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral statistics of intermittent interval maps via the Abel function"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Settings s;

  auto* abel = app.add_subcommand("abel", "Abel function data");
  abel->require_subcommand(1);
  auto* abel_coeffs = abel->add_subcommand("coeffs", "expansion coefficients as JSON");
  auto* abel_eval = abel->add_subcommand("eval", "CSV of x, A(x), A'(x)");
  auto* induced = app.add_subcommand("induced", "first-return map");
  induced->require_subcommand(1);
  auto* ind_map = induced->add_subcommand("map", "CSV of x, F(x)");
  auto* ind_tau = induced->add_subcommand("tau", "CSV of x, tau(x)");
  auto* acim = app.add_subcommand("acim", "invariant densities (default: full)");
  acim->require_subcommand(0, 1);
  auto* acim_ind = acim->add_subcommand("induced", "CSV of x, rho_ind on [a,1]");
  auto* acim_full = acim->add_subcommand("full", "CSV of x, rho_ind, rho_full on (0,1]");
  auto* stats = app.add_subcommand("stats", "statistical quantities as JSON");
  stats->require_subcommand(1);
  auto* st_rt = stats->add_subcommand("return-time", "mean return time to [a,1]");
  auto* st_avg = stats->add_subcommand("average", "normalised average of --obs");
  auto* st_diff = stats->add_subcommand("diffusion", "diffusion coefficient of --obs");
  auto* validate = app.add_subcommand("validate", "oracle suites; exit code 2 on failure");
  auto* benchc = app.add_subcommand("bench", "convergence table as CSV");
  auto* run = app.add_subcommand("run", "config-driven pipeline");

  for (CLI::App* sc : {abel_coeffs, abel_eval, ind_map, ind_tau, acim_ind, acim_full, st_rt, st_avg, st_diff, validate, benchc})
    add_common(sc, s);
  add_common(acim, s);

  std::string xs;
  std::size_t grid = 200;
  bool log_grid = false;
  for (CLI::App* sc : {abel_eval, ind_map, ind_tau, acim, acim_ind, acim_full}) {
    sc->add_option("--x", xs, "comma-separated points (overrides --grid)");
    sc->add_option("--grid", grid, "number of grid points")->capture_default_str()->check(CLI::Range(1, 10000000));
    sc->add_flag("--log", log_grid, "log-spaced grid");
  }
  std::uint64_t mc_samples = 0;
  st_diff->add_option("--mc-samples", mc_samples, "also run the Monte-Carlo oracle with this many samples");
  std::string suite = "all";
  validate->add_option("suite", suite, "all|abel|induced|em|spectral|density|mc")->capture_default_str()
      ->check(CLI::IsMember({"all", "abel", "induced", "em", "spectral", "density", "mc"}));
  std::string n_list = "16,32,64", bins_list = "64,256,1024", steps_list = "100000,1000000";
  benchc->add_option("--N-list", n_list)->capture_default_str();
  benchc->add_option("--bins-list", bins_list)->capture_default_str();
  benchc->add_option("--steps-list", steps_list)->capture_default_str();
  std::string config;
  unsigned run_jobs = 0;
  run->add_option("--config", config, "JSON configuration document")->required();
  run->add_option("--jobs", run_jobs, "worker threads (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return run_config(config, run_jobs);
    if (benchc->parsed()) return bench(s, n_list, bins_list, steps_list);

    auto map = load_map(s);
    const auto points = [&](double lo, double hi) {
      return xs.empty() ? grid_points(lo, hi, grid, log_grid) : parse_list(xs, "--x");
    };
    const std::string header = "# " + std::string(kVersion) + " config_hash=";

    if (abel_coeffs->parsed() || abel_eval->parsed()) {
      AbelOptions ao;
      ao.N = s.abel_N;
      const AbelFunction af = make_abel_function(map, ao);
      if (abel_coeffs->parsed()) {
        json j = expansion_to_json(af.expansion());
        j["provenance"] = provenance(s, "abel coeffs");
        emit(s, dump17(j));
      } else {
        std::string csv = header + provenance(s, "abel eval")["config_hash"].get<std::string>() + "\nx,A,A_prime\n";
        for (double x : points(1e-6, 1.0)) csv += num(x) + "," + num(af.eval(x)) + "," + num(af.eval_prime(x)) + "\n";
        emit(s, csv);
      }
      return 0;
    }
    if (ind_map->parsed() || ind_tau->parsed()) {
      const AbelFunction af = make_abel_function(map);
      const bool tau = ind_tau->parsed();
      std::string csv = header + provenance(s, tau ? "induced tau" : "induced map")["config_hash"].get<std::string>() +
                        (tau ? "\nx,tau\n" : "\nx,F\n");
      for (double x : points(map->a(), 1.0))
        csv += num(x) + "," + (tau ? std::to_string(return_time(af, x)) : num(induced_map(af, x))) + "\n";
      emit(s, csv);
      return 0;
    }

    const Observable obs = make_observable(s.obs);
    if (validate->parsed()) {
      const StatisticsContext c = make_context(map, stat_options(s));
      std::vector<Check> checks;
      const auto want = [&](const char* k) { return suite == "all" || suite == k; };
      const auto add = [&](std::vector<Check> v) { checks.insert(checks.end(), v.begin(), v.end()); };
      if (want("abel")) add(suite_abel(*c.af, c.bc));
      if (want("induced")) add(suite_induced(*c.af, s.seed));
      if (want("em")) add(suite_em(c, s.seed));
      if (want("spectral")) add(suite_spectral(c, s));
      if (want("density")) add(suite_density(c));
      if (want("mc")) add(suite_monte_carlo(c, obs, s.seed));
      bool all = true;
      json list = json::array();
      for (const Check& k : checks) {
        all = all && k.pass;
        list.push_back(to_json(k));
      }
      emit(s, dump17(json{{"suite", suite}, {"alpha", map->alpha()}, {"pass", all}, {"checks", list},
                          {"provenance", provenance(s, "validate " + suite)}}));
      return all ? 0 : 2;
    }

    const StatisticsContext c = make_context(map, stat_options(s));
    if (acim->parsed()) {
      const bool ind = acim_ind->parsed();
      std::string csv = header + provenance(s, ind ? "acim induced" : "acim full")["config_hash"].get<std::string>() +
                        (ind ? "\nx,rho_ind\n" : "\nx,rho_ind,rho_full\n");
      for (double x : points(ind ? map->a() : (log_grid ? 1e-6 : 1.0 / double(grid)), 1.0)) {
        if (ind) csv += num(x) + "," + num(c.acim(x)) + "\n";
        else csv += num(x) + "," + (x >= map->a() ? num(c.acim(x)) : std::string()) + "," + num(full_density(c, x)) + "\n";
      }
      emit(s, csv);
      return 0;
    }
    json out;
    if (st_rt->parsed()) out = scalar(s, *map, "return_time", mean_return_time(c));
    else if (st_avg->parsed()) out = scalar(s, *map, "average:" + obs.label, observable_average(c, obs));
    else {
      const StatResult r = diffusion_coefficient(c, obs);
      out = scalar(s, *map, "diffusion:" + obs.label, r);
      if (mc_samples > 0) {
        const MCEstimate mc = monte_carlo_sigma2(*map, obs, mc_samples, 1000, s.seed, 10, s.jobs);
        const bool agree = std::abs(r.value - mc.mean) <= 3.0 * mc.stderr_;
        out["monte_carlo"] = {{"value", mc.mean}, {"stderr", mc.stderr_}, {"samples", mc_samples}};
        out["oracle_agreement"] = agree;
      }
    }
    out["provenance"] = provenance(s, st_rt->parsed() ? "stats return-time" : st_avg->parsed() ? "stats average" : "stats diffusion");
    emit(s, dump17(out));
    if (out.contains("oracle_agreement") && !out["oracle_agreement"].get<bool>()) return 2;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
