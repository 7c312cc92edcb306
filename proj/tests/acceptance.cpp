// Acceptance suite. One line per criterion; exit status 1 if any fails.

#include "grenfun/functionals.hpp"
#include "grenfun/grenander.hpp"
#include "grenfun/harness.hpp"
#include "grenfun/inference.hpp"
#include "grenfun/limitlaw.hpp"
#include "grenfun/majorant.hpp"
#include "grenfun/normal.hpp"
#include "grenfun/stats.hpp"
#include "grenfun/truth.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace grenfun;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome
{
  bool pass = false;
  std::string detail;
};

int failures = 0;

void
run(const std::string& id,
    const std::string& title,
    double max_seconds,
    const std::function<Outcome()>& body)
{
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = { false, std::string("exception: ") + e.what() };
  }
  const double secs =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
  if (secs > max_seconds) {
    out.pass = false;
    out.detail += " [runtime over " + std::to_string(max_seconds) + " s]";
  }
  if (!out.pass)
    ++failures;
  std::printf("%s %s %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL",
              id.c_str(), title.c_str(), out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string
fmt(const char* format, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<Point2>
random_points(RandomStream& rng, std::size_t n, bool integer)
{
  std::vector<Point2> pts;
  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x += integer ? static_cast<double>(1 + rng.bits() % 4)
                 : 0.001 + rng.uniform();
    const double y = integer ? static_cast<double>(rng.bits() % 40)
                             : 5.0 * rng.uniform();
    pts.push_back({ x, y });
  }
  return pts;
}

ScenarioSpec
random_scenario(RandomStream& rng)
{
  switch (rng.bits() % 4) {
    case 0:
      return ScenarioSpec::exponential(0.5 + 2.0 * rng.uniform());
    case 1:
      return ScenarioSpec::two_level();
    case 2:
      return ScenarioSpec::uniform(0.5 + rng.uniform());
    default:
      return ScenarioSpec::piecewise_constant({ 0.5, 1.5, 3.0 },
                                              { 0.8, 0.3, 0.2 });
  }
}

ScalarFunctional
expm1_functional()
{
  auto e = [](double z) { return std::exp(z); };
  return ScalarFunctional::make(
    "expm1", [](double z) { return std::expm1(z); }, e, e, e, e);
}

Outcome
geometry_oracle()
{
  RandomStream rng(derive_seed(kSeed, 1));
  std::size_t mismatches = 0, points = 0;
  for (int set = 0; set < 1000; ++set) {
    const auto pts = random_points(rng, 2 + rng.bits() % 199, set % 2 == 0);
    const auto hull = lcm(pts, pts.front().x, pts.back().x);
    const auto ref = oracle::gift_wrap_hull(pts);
    bool same = hull.size() == ref.size();
    for (std::size_t k = 0; same && k < ref.size(); ++k)
      same = hull.knots()[k] == ref[k].x && hull.values()[k] == ref[k].y;
    // Oracle value at each input point by linear interpolation on its hull.
    std::size_t seg = 0;
    for (const auto& p : pts) {
      while (seg + 2 < ref.size() && ref[seg + 1].x <= p.x)
        ++seg;
      const Point2 a = ref[seg], b = ref[std::min(seg + 1, ref.size() - 1)];
      const double v =
        b.x == a.x ? a.y : a.y + (b.y - a.y) * ((p.x - a.x) / (b.x - a.x));
      same = same && std::abs(hull(p.x) - v) <= 4e-15 * std::max(1.0, std::abs(v));
      ++points;
    }
    mismatches += same ? 0 : 1;
  }
  return { mismatches == 0,
           fmt("%zu of 1000 point sets differ from the gift-wrap hull "
               "(%zu grid points checked)",
               mismatches, points) };
}

Outcome
pava_equivalence()
{
  RandomStream rng(derive_seed(kSeed, 2));
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Sample s =
      draw(random_scenario(rng), 1 + rng.bits() % 500, rng);
    const StepDensity d = fit(s);
    const auto ref = oracle::pava_grenander(s);
    for (std::size_t j = 0; j < ref.level.size(); ++j) {
      const double mid = 0.5 * (ref.left[j] + ref.right[j]);
      worst = std::max(worst, std::abs(d(mid) - ref.level[j]) / ref.level[j]);
    }
  }
  return { worst <= 1e-12,
           fmt("max relative level gap %.3g over 500 samples (tol 1e-12)",
               worst) };
}

Outcome
empirical_identity()
{
  RandomStream rng(derive_seed(kSeed, 3));
  const ScalarFunctional hs[] = { scalar_functional_by_name("identity"),
                                  power_functional(2.0), power_functional(3.0),
                                  expm1_functional() };
  // The correction is a difference of two sums of size max(1, mean phi);
  // it is measured on that scale. worst_abs covers triples with unit scale.
  double worst_rel = 0.0, worst_corr = 0.0, worst_abs = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ScenarioSpec spec = random_scenario(rng);
    const Sample s = draw(spec, 1 + rng.bits() % 10000, rng);
    const StepDensity d = fit(s);
    const auto& h = hs[rng.bits() % 4];
    const double a = nu_plugin(h, d);
    const double b = empirical_average(h, s, d);
    worst_rel = std::max(worst_rel, std::abs(a - b) / std::max(std::abs(a),
                                                                std::abs(b)));
    double phi_sum = 0.0;
    for (const double x : s.values()) {
      const double z = d(x);
      phi_sum += h.h(z) + z * h.dh(z);
    }
    const double scale =
      std::max(1.0, std::abs(phi_sum) / static_cast<double>(s.size()));
    const double corr = std::abs(one_step_correction(h, s, d));
    worst_corr = std::max(worst_corr, corr / scale);
    if (scale == 1.0)
      worst_abs = std::max(worst_abs, corr);
  }
  return { worst_rel <= 1e-12 && worst_corr <= 1e-10,
           fmt("max relative gap %.3g (tol 1e-12); one-step correction max "
               "%.3g on the scale of its terms, %.3g absolute where that "
               "scale is 1 (tol 1e-10); 1000 triples",
               worst_rel, worst_corr, worst_abs) };
}

Outcome
scenario_constants()
{
  const auto square = smooth_functional_by_name("power:2");
  const double tau_exp = true_tau(square, ScenarioSpec::exponential(1.0));
  const double s2_exp = true_sigma2(square, ScenarioSpec::exponential(1.0));
  const double tau_pwa = true_tau(square, ScenarioSpec::two_level());
  const double s2_pwa = true_sigma2(square, ScenarioSpec::two_level());

  // Closed forms for the two-level truth.
  const double r2 = std::numbers::sqrt2;
  const double c = 1.0 - 1.0 / r2;
  const double hi = r2 + 1.0, lo = r2 - 1.0;
  const double f2 = hi * hi * c + lo * lo * (1.0 - c);
  const double f3 = hi * hi * hi * c + lo * lo * lo * (1.0 - c);
  const double closed_s2 = 4.0 * (f3 - f2 * f2);

  const double tol = 5e-4;
  const bool pass = std::abs(tau_exp - 0.5) <= tol &&
                    std::abs(s2_exp - 4.0 / 12.0) <= tol &&
                    std::abs(tau_pwa - 1.828) <= tol &&
                    std::abs(s2_pwa - 3.314) <= tol &&
                    std::abs(tau_pwa - f2) <= 1e-12 &&
                    std::abs(s2_pwa - closed_s2) <= 1e-12;
  return { pass,
           fmt("exponential tau=%.6f sigma2=%.6f; two-level tau=%.6f "
               "sigma2=%.6f (reported 1.828, 3.314; tol 5e-4)",
               tau_exp, s2_exp, tau_pwa, s2_pwa) };
}

Outcome
two_level_normality()
{
  StudyConfig c;
  c.scenario = ScenarioSpec::two_level();
  c.functional = "power:2";
  c.ns = { 20000 };
  c.replications = 500;
  c.seed = derive_seed(kSeed, 5);
  const auto r = run_study(c, 1).at(0);
  const double ks = ks_distance(r.statistics, NormalLaw{ 0.0, 3.314 });
  return { ks < 0.08,
           fmt("KS vs N(0, 3.314) = %.4f (tol 0.08); mean %.3f var %.3f, "
               "coverage %.3f",
               ks, r.summary.mean, r.summary.variance, r.ci_coverage) };
}

Outcome
exponential_shape()
{
  StudyConfig c;
  c.scenario = ScenarioSpec::exponential(1.0);
  c.functional = "power:2";
  c.ns = { 100000 };
  c.replications = 300;
  c.seed = derive_seed(kSeed, 6);
  const auto r = run_study(c, 1).at(0);
  const NormalLaw fitted{ mean(r.statistics), sample_variance(r.statistics) };
  const auto qq = qq_pairs(r.statistics, fitted);
  double worst = 0.0;
  for (std::size_t k = 4; k <= 94; ++k) // p = 0.05 .. 0.95
    worst = std::max(worst, std::abs(qq[k].second - qq[k].first));
  return { worst <= 0.1,
           fmt("max Q-Q deviation on the central 90%% = %.4f (tol 0.1); "
               "mean %.3f var %.3f (efficient 0.333)",
               worst, fitted.mean, fitted.variance) };
}

Outcome
limit_sampler()
{
  RandomStream rng(derive_seed(kSeed, 7));
  const auto square = smooth_functional_by_name("power:2");

  // Identity for a strictly concave model.
  const auto expo = TrueModel::from_scenario(ScenarioSpec::exponential(1.0));
  LimitLawSampler exp_sampler(square, expo, 500);
  bool identity = true;
  for (int k = 0; k < 200; ++k) {
    const GridPath b = bridge_path(exp_sampler.bridge_grid(), rng);
    const GridPath path(
      std::vector<double>(exp_sampler.grid().begin(), exp_sampler.grid().end()),
      std::vector<double>(b.values.begin(),
                          b.values.begin() +
                            static_cast<std::ptrdiff_t>(exp_sampler.grid().size())));
    identity = identity && hadamard_lcm_derivative(expo, path) == path;
  }

  // Per-interval majorant against the chord oracle on 200-point grids.
  const auto step = TrueModel::from_scenario(
    ScenarioSpec::piecewise_constant({ 0.5, 1.5, 3.0 }, { 0.8, 0.3, 0.2 }));
  double worst_lcm = 0.0;
  for (int k = 0; k < 200; ++k) {
    std::vector<double> grid = step.affine_breaks;
    while (grid.size() < 200)
      grid.push_back(3.0 * rng.uniform());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> u(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
      u[j] = step.scenario.cdf(grid[j]);
    u.front() = 0.0;
    u.back() = 1.0;
    const GridPath path(grid, bridge_path(u, rng).values);
    const GridPath out = hadamard_lcm_derivative(step, path);
    for (std::size_t i = 1; i < step.affine_breaks.size(); ++i) {
      const std::size_t a = grid_index(grid, step.affine_breaks[i - 1]);
      const std::size_t b = grid_index(grid, step.affine_breaks[i]);
      std::vector<Point2> pts;
      for (std::size_t j = a; j <= b; ++j)
        pts.push_back({ grid[j], path.values[j] });
      const auto ref = oracle::chord_majorant(pts);
      for (std::size_t j = a; j <= b; ++j)
        worst_lcm = std::max(worst_lcm, std::abs(out.values[j] - ref[j - a]));
    }
  }

  // Y variance at 1e5 draws against the efficient variance.
  constexpr std::size_t draws = 100000;
  constexpr std::size_t cells = 8000;
  auto band = [&](const ScenarioSpec& spec, std::uint64_t tag, double& var,
                  double& target, double& se) {
    const auto res = sample_limit_law(square, spec, draws, cells,
                                      derive_seed(kSeed, tag), 1);
    var = sample_variance(res.draws);
    target = true_sigma2(square, spec);
    se = target * std::sqrt(2.0 / static_cast<double>(draws - 1));
    return std::abs(var - target) <= 3.0 * se;
  };
  double v1, t1, se1, v2, t2, se2;
  const bool exp_ok = band(ScenarioSpec::exponential(1.0), 71, v1, t1, se1);
  const bool pwa_ok = band(ScenarioSpec::two_level(), 72, v2, t2, se2);

  return { identity && worst_lcm <= 1e-12 && exp_ok && pwa_ok,
           fmt("identity %s; per-interval majorant gap %.3g (tol 1e-12); "
               "Var Y exponential %.4f vs %.4f (3 SE = %.4f), two-level "
               "%.4f vs %.4f (3 SE = %.4f)",
               identity ? "exact" : "VIOLATED", worst_lcm, v1, t1, 3 * se1,
               v2, t2, 3 * se2) };
}

Outcome
uniform_clt()
{
  const std::size_t n = 100000, reps = 500;
  const auto r =
    run_uniform_study("power:2", { n }, reps, derive_seed(kSeed, 8), 1).at(0);
  const double log_n = std::log(static_cast<double>(n));
  const double half = 3.0 * std::sqrt(3.0 * log_n / static_cast<double>(reps));
  const double m = mean(r.raw);
  const double ks = ks_distance(r.statistics, NormalLaw{ 0.0, 1.0 });
  std::vector<double> sorted = r.raw;
  std::sort(sorted.begin(), sorted.end());
  return { std::abs(m - log_n) <= half && ks < 0.15,
           fmt("mean n*int(fhat-1)^2 = %.3f, band %.3f +- %.3f; KS vs N(0,1) "
               "= %.4f (tol 0.15); median %.3f, max %.1f",
               m, log_n, half, ks, sorted_quantile(sorted, 0.5),
               sorted.back()) };
}

std::string
read_file(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome
reproducibility()
{
  const auto root =
    std::filesystem::temp_directory_path() / "grenfun_acceptance_repro";
  std::filesystem::remove_all(root);
  std::vector<std::pair<std::string, std::vector<SimulationReport>>> runs;

  StudyConfig a;
  a.scenario = ScenarioSpec::two_level();
  a.ns = { 1000, 4000 };
  a.replications = 200;
  a.seed = derive_seed(kSeed, 9);
  StudyConfig b = a;
  b.functional = "xz2";
  b.limit_draws = 2000;
  b.grid_cells = 400;
  StudyConfig e = a;
  e.scenario = ScenarioSpec::exponential(1.0);

  std::size_t compared = 0, differing = 0;
  for (const StudyConfig* cfg : { &a, &b, &e }) {
    const auto one = run_study(*cfg, 1);
    const auto four = run_study(*cfg, 4);
    for (std::size_t k = 0; k < one.size(); ++k) {
      write_report(one[k], root / "t1");
      write_report(four[k], root / "t4");
      const auto name = one[k].stem() + "_statistics.csv";
      ++compared;
      differing += read_file(root / "t1" / name) == read_file(root / "t4" / name)
                     ? 0
                     : 1;
    }
  }
  const auto u1 = run_uniform_study("power:2", { 2000 }, 100, kSeed, 1);
  const auto u4 = run_uniform_study("power:2", { 2000 }, 100, kSeed, 4);
  ++compared;
  differing += u1[0].statistics_csv() == u4[0].statistics_csv() ? 0 : 1;
  std::filesystem::remove_all(root);
  return { differing == 0,
           fmt("%zu of %zu statistics files differ between 1 and 4 threads",
               differing, compared) };
}

void
describe_xz2()
{
  // Descriptive only: the limit under a step truth is not asserted normal.
  StudyConfig c;
  c.scenario = ScenarioSpec::two_level();
  c.functional = "xz2";
  c.ns = { 5000 };
  c.replications = 300;
  c.limit_draws = 20000;
  c.grid_cells = 2000;
  c.seed = derive_seed(kSeed, 10);
  const auto r = run_study(c, 1).at(0);
  const double ks_normal =
    ks_distance(r.statistics, NormalLaw{ 0.0, r.sigma2_eff });
  std::printf("INFO x*z^2 two-level truth, n=5000, 300 reps: KS vs limit "
              "sample %.4f, KS vs N(0, %.4f) %.4f, mean %.4f var %.4f\n",
              r.summary.ks, r.sigma2_eff, ks_normal, r.summary.mean,
              r.summary.variance);
}

} // namespace

int
main()
{
  run("C1", "majorant vs brute-force hull", 10.0, geometry_oracle);
  run("C2", "Grenander levels vs PAVA", 30.0, pava_equivalence);
  run("C3", "plug-in equals empirical average", 60.0, empirical_identity);
  run("C4", "scenario constants", 60.0, scenario_constants);
  run("C5", "two-level truth, n=20000, 500 reps", 600.0, two_level_normality);
  run("C6", "exponential truth, n=100000, 300 reps", 1200.0, exponential_shape);
  run("C7", "limit-law sampler", 1200.0, limit_sampler);
  run("C8", "uniform truth, n=100000, 500 reps", 900.0, uniform_clt);
  run("C9", "thread-count reproducibility", 1200.0, reproducibility);
  describe_xz2();
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
