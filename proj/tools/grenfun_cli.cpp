// Command-line front end: estimation on data files, replication studies,
// limit-law sampling, and the uniform-truth study.

#include "grenfun/error.hpp"
#include "grenfun/functionals.hpp"
#include "grenfun/grenander.hpp"
#include "grenfun/harness.hpp"
#include "grenfun/inference.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace fs = std::filesystem;
using namespace grenfun;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct GlobalOptions
{
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  unsigned threads = 1;
};

std::string
read_text(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InvalidInput("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void
write_text(const fs::path& path, const std::string& body)
{
  fs::create_directories(path.parent_path().empty() ? fs::path(".")
                                                    : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InvalidInput("cannot write " + path.string());
  out << body;
}

int
run_estimate(const GlobalOptions& global,
             const std::string& data,
             const std::string& functional,
             std::optional<double> level)
{
  const Sample s = read_sample_file(data);
  const StepDensity d = fit(s);
  const SmoothFunctional g = smooth_functional_by_name(functional);
  const double ci_level = level.value_or(0.95);
  ConfidenceInterval ci =
    g.x_free ? ci_mu(scalar_functional_by_name(functional), s, ci_level)
             : ci_tau(g, s, ci_level);
  if (!std::isfinite(ci.estimate))
    throw NumericFailure("estimate is not finite");

  nlohmann::json j;
  j["n"] = s.size();
  j["functional"] = g.name;
  j["estimate"] = ci.estimate;
  j["sigma_hat"] = ci.sigma_hat;
  if (level)
    j["ci"] = nlohmann::json::parse(ci.to_json());
  j["density"] = nlohmann::json::parse(d.to_json());
  std::cout << j.dump(2) << "\n";
  if (global.out != ".") {
    const fs::path dir(global.out);
    write_text(dir / "density.json", d.to_json() + "\n");
    write_text(dir / "density.csv", d.to_csv());
    write_text(dir / "estimate.json", j.dump(2) + "\n");
  }
  return 0;
}

int
run_simulate(const GlobalOptions& global, const std::string& config_path)
{
  StudyConfig config = StudyConfig::from_json(read_text(config_path));
  if (global.seed)
    config.seed = *global.seed;
  for (const auto& r : run_study(config, global.threads)) {
    write_report(r, global.out);
    std::cout << r.stem() << ": mean=" << r.summary.mean
              << " var=" << r.summary.variance << " ks=" << r.summary.ks
              << " (" << r.reference_kind << " reference)"
              << " coverage=" << r.ci_coverage << "\n";
  }
  return 0;
}

int
run_limit_sample(const GlobalOptions& global,
                 const std::string& config_path,
                 std::size_t draws)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("limit config: ") + e.what());
  }
  ScenarioSpec truth = ScenarioSpec::exponential(1.0);
  std::string functional;
  std::size_t cells = 2000;
  std::uint64_t seed = 0;
  try {
    truth = ScenarioSpec::from_json(j.at("scenario").dump());
    functional = j.value("functional", std::string("power:2"));
    cells = j.value("grid_cells", cells);
    seed = j.value("seed", truth.seed());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("limit config: ") + e.what());
  }
  if (global.seed)
    seed = *global.seed;
  const SmoothFunctional g = smooth_functional_by_name(functional);
  const auto result =
    sample_limit_law(g, truth, draws, cells, seed, global.threads);

  nlohmann::json meta;
  meta["model"] = nlohmann::json::parse(truth.to_json());
  meta["functional"] = g.name;
  meta["grid_size"] = cells;
  meta["seed"] = seed;
  meta["truncation"] = result.truncation;
  meta["tail_bound"] = result.tail_bound;
  const fs::path path = fs::path(global.out) / ("limit_" + truth.label() +
                                                "_" + file_safe(g.name) +
                                                ".csv");
  write_text(path, limit_sample_csv(result, meta.dump()));
  std::cout << path.string() << "\n";
  return 0;
}

int
run_uniform(const GlobalOptions& global,
            const std::string& h,
            const std::vector<std::size_t>& ns,
            std::size_t reps)
{
  const auto reports =
    run_uniform_study(h, ns, reps, global.seed.value_or(0), global.threads);
  for (const auto& r : reports) {
    write_report(r, global.out);
    std::cout << r.stem() << ": mean=" << r.summary.mean
              << " var=" << r.summary.variance << " ks=" << r.summary.ks
              << "\n";
  }
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Plug-in estimation of integrated functionals of a monotone "
                "density" };
  app.require_subcommand(1);
  GlobalOptions global;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  app.add_option("--out", global.out, "Output directory");
  app.add_option("--threads", global.threads, "Worker threads")
    ->check(CLI::PositiveNumber);

  std::string data, functional = "power:2";
  double level = 0.95;
  auto* estimate = app.add_subcommand("estimate", "Estimate from a data file");
  estimate->fallthrough();
  estimate->add_option("--data", data, "One observation per line")
    ->required();
  estimate->add_option("--functional", functional,
                       "power:p | identity | xz2");
  auto* ci_opt =
    estimate->add_option("--ci", level, "Confidence level in (0, 1)");

  std::string config;
  auto* simulate = app.add_subcommand("simulate", "Run a replication study");
  simulate->fallthrough();
  simulate->add_option("--config", config, "Study JSON")->required();

  std::string limit_config;
  std::size_t draws = 10000;
  auto* limit =
    app.add_subcommand("limit-sample", "Sample the limiting distribution");
  limit->fallthrough();
  limit->add_option("--config", limit_config, "Limit JSON")->required();
  limit->add_option("--draws", draws, "Number of draws");

  std::string h = "power:2";
  std::vector<std::size_t> ns{ 100000 };
  std::size_t reps = 500;
  auto* uniform =
    app.add_subcommand("uniform-clt", "Uniform-truth standardized statistic");
  uniform->fallthrough();
  uniform->set_help_flag("--help", "Print this help message and exit");
  uniform->add_option("--h", h, "power:p | identity");
  uniform->add_option("--n", ns, "Sample size(s)");
  uniform->add_option("--reps", reps, "Replications");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (*seed_opt)
    global.seed = seed;

  try {
    if (*estimate)
      return run_estimate(global, data, functional,
                          *ci_opt ? std::optional<double>(level)
                                  : std::nullopt);
    if (*simulate)
      return run_simulate(global, config);
    if (*limit)
      return run_limit_sample(global, limit_config, draws);
    if (*uniform)
      return run_uniform(global, h, ns, reps);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
