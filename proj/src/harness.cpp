#include "grenfun/harness.hpp"

#include "grenfun/error.hpp"
#include "grenfun/grenander.hpp"
#include "grenfun/inference.hpp"
#include "grenfun/limitlaw.hpp"
#include "grenfun/normal.hpp"
#include "grenfun/random.hpp"
#include "grenfun/truth.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

namespace grenfun {

namespace {

constexpr std::uint64_t kLimitStreamTag = 0x4c494d4954ULL; // "LIMIT"

std::string
format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

StudySummary
summarize(std::span<const double> stats,
          const std::string& reference_kind,
          const NormalLaw& normal_ref,
          std::span<const double> empirical_ref)
{
  StudySummary s;
  s.mean = mean(stats);
  s.variance = sample_variance(stats);
  if (reference_kind == "limit") {
    s.ks = ks_distance(stats, empirical_ref);
    s.qq = qq_pairs(stats, empirical_ref);
  } else {
    s.ks = ks_distance(stats, normal_ref);
    s.qq = qq_pairs(stats, normal_ref);
  }
  s.mean_within_noise =
    std::abs(s.mean) <=
    5.0 * std::sqrt(s.variance / static_cast<double>(stats.size()));
  return s;
}

double
seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
    .count();
}

} // namespace

void
parallel_for(std::size_t count,
             unsigned threads,
             const std::function<void(std::size_t)>& body)
{
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count)
        return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers =
    static_cast<unsigned>(std::min<std::size_t>(threads, count));
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back(worker);
  for (auto& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

StudyConfig
StudyConfig::from_json(const std::string& text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("study config: ") + e.what());
  }
  try {
    StudyConfig c;
    c.scenario = ScenarioSpec::from_json(j.at("scenario").dump());
    c.functional = j.value("functional", c.functional);
    if (j.contains("n")) {
      const auto& n = j.at("n");
      c.ns = n.is_array() ? n.get<std::vector<std::size_t>>()
                          : std::vector<std::size_t>{ n.get<std::size_t>() };
    }
    c.replications = j.value("replications", c.replications);
    c.seed = j.value("seed", c.scenario.seed());
    const auto ref = j.value("reference", std::string("auto"));
    if (ref == "auto")
      c.reference = ReferenceKind::automatic;
    else if (ref == "normal")
      c.reference = ReferenceKind::normal;
    else if (ref == "limit")
      c.reference = ReferenceKind::limit;
    else
      throw InvalidInput("unknown reference '" + ref +
                         "' (valid: auto, normal, limit)");
    c.limit_draws = j.value("limit_draws", c.limit_draws);
    c.grid_cells = j.value("grid_cells", c.grid_cells);
    c.ci_level = j.value("ci_level", c.ci_level);
    if (c.ns.empty() || c.replications == 0)
      throw InvalidInput("study config: need at least one n and one "
                         "replication");
    for (const auto n : c.ns)
      if (n == 0)
        throw InvalidInput("study config: sample sizes must be >= 1");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("study config: ") + e.what());
  }
}

std::string
file_safe(std::string name)
{
  for (char& ch : name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
          ch == '-' || ch == '.'))
      ch = '-';
  return name;
}

std::string
SimulationReport::stem() const
{
  return scenario.label() + "_" + file_safe(functional) + "_n" +
         std::to_string(n);
}

std::string
SimulationReport::statistics_csv() const
{
  std::string out = "replication,statistic\n";
  for (std::size_t i = 0; i < statistics.size(); ++i)
    out += std::to_string(i) + "," + format_double(statistics[i]) + "\n";
  return out;
}

std::string
SimulationReport::qq_csv() const
{
  std::string out = "reference_quantile,sample_quantile\n";
  for (const auto& [r, s] : summary.qq)
    out += format_double(r) + "," + format_double(s) + "\n";
  return out;
}

std::string
SimulationReport::summary_json() const
{
  nlohmann::json j;
  j["scenario"] = nlohmann::json::parse(scenario.to_json());
  j["functional"] = functional;
  j["n"] = n;
  j["replications"] = replications;
  j["seed"] = seed;
  j["truth"] = truth;
  j["sigma2_eff"] = sigma2_eff;
  nlohmann::json ref;
  ref["kind"] = reference_kind;
  if (reference_kind == "normal") {
    ref["mean"] = reference_normal.mean;
    ref["variance"] = reference_normal.variance;
  } else {
    ref["draws"] = reference_sample.size();
    ref["file"] = reference_file;
  }
  j["reference"] = ref;
  j["summary"] = { { "mean", summary.mean },
                   { "variance", summary.variance },
                   { "ks", summary.ks },
                   { "mean_within_noise", summary.mean_within_noise },
                   { "observed_bias", summary.mean } };
  j["ci"] = { { "level", ci_level },
              { "coverage", ci_coverage },
              { "validity", "pointwise in the truth, not uniform" } };
  if (!raw.empty())
    j["raw_scaled_excess_mean"] = mean(raw);
  j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

LimitSampleResult
sample_limit_law(const SmoothFunctional& g,
                 const ScenarioSpec& truth,
                 std::size_t draws,
                 std::size_t grid_cells,
                 std::uint64_t seed,
                 unsigned threads)
{
  const TrueModel model = TrueModel::from_scenario(truth);
  const LimitLawSampler prototype(g, model, grid_cells);
  LimitSampleResult result;
  result.draws.resize(draws);
  result.truncation = model.truncation();

  threads = std::max(1u, threads);
  std::vector<LimitLawSampler> samplers(threads, prototype);
  // Each worker owns one sampler; draws are assigned in fixed blocks.
  const std::size_t block = (draws + threads - 1) / threads;
  parallel_for(threads, threads, [&](std::size_t t) {
    const std::size_t lo = t * block;
    const std::size_t hi = std::min(draws, lo + block);
    for (std::size_t i = lo; i < hi; ++i) {
      RandomStream stream(derive_seed(seed, i));
      result.draws[i] = samplers[t].draw(stream);
    }
  });
  double peak = 0.0;
  for (const auto& s : samplers)
    peak = std::max(peak, s.max_abs_path());
  result.tail_bound = peak * prototype.tail_variation();
  return result;
}

std::string
limit_sample_csv(const LimitSampleResult& result,
                 const std::string& metadata_json)
{
  std::string out = "# " + metadata_json + "\n";
  for (const double y : result.draws)
    out += format_double(y) + "\n";
  return out;
}

std::vector<SimulationReport>
run_study(const StudyConfig& config, unsigned threads)
{
  const SmoothFunctional g = smooth_functional_by_name(config.functional);
  std::optional<ScalarFunctional> scalar;
  if (g.x_free)
    scalar = scalar_functional_by_name(config.functional);
  const TrueModel model = TrueModel::from_scenario(config.scenario);

  const double truth = true_tau(g, config.scenario);
  const double sigma2 = true_sigma2(g, config.scenario);

  std::string reference_kind = "normal";
  if (config.reference == ReferenceKind::limit ||
      (config.reference == ReferenceKind::automatic && !g.x_free &&
       model.concavity == Concavity::piecewise_affine))
    reference_kind = "limit";

  LimitSampleResult limit;
  if (reference_kind == "limit")
    limit = sample_limit_law(g, config.scenario, config.limit_draws,
                             config.grid_cells,
                             derive_seed(config.seed, kLimitStreamTag),
                             threads);

  std::vector<SimulationReport> reports;
  for (const std::size_t n : config.ns) {
    const auto start = std::chrono::steady_clock::now();
    SimulationReport r;
    r.scenario = config.scenario;
    r.functional = config.functional;
    r.n = n;
    r.replications = config.replications;
    r.seed = config.seed;
    r.truth = truth;
    r.sigma2_eff = sigma2;
    r.ci_level = config.ci_level;
    r.statistics.assign(config.replications, 0.0);
    r.studentized.assign(config.replications, 0.0);
    std::vector<char> covered(config.replications, 0);

    const std::uint64_t base = derive_seed(config.seed, n);
    const double root_n = std::sqrt(static_cast<double>(n));
    parallel_for(config.replications, threads, [&](std::size_t i) {
      RandomStream stream(derive_seed(base, i));
      const Sample s = draw(config.scenario, n, stream);
      ConfidenceInterval ci = scalar ? ci_mu(*scalar, s, config.ci_level)
                                     : ci_tau(g, s, config.ci_level);
      r.statistics[i] = root_n * (ci.estimate - truth);
      r.studentized[i] =
        ci.sigma_hat > 0.0 ? r.statistics[i] / ci.sigma_hat : NAN;
      covered[i] = ci.lower <= truth && truth <= ci.upper;
    });

    std::size_t hits = 0;
    for (const char c : covered)
      hits += c ? 1 : 0;
    r.ci_coverage =
      static_cast<double>(hits) / static_cast<double>(config.replications);

    r.reference_kind = reference_kind;
    r.reference_normal = NormalLaw{ 0.0, sigma2 };
    if (reference_kind == "limit") {
      r.reference_sample = limit.draws;
      r.reference_file = r.scenario.label() + "_" + file_safe(r.functional) +
                         "_limit_reference.csv";
    }
    r.summary = summarize(r.statistics, reference_kind, r.reference_normal,
                          r.reference_sample);
    r.wall_seconds = seconds_since(start);
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<SimulationReport>
run_uniform_study(const std::string& h_name,
                  const std::vector<std::size_t>& ns,
                  std::size_t replications,
                  std::uint64_t seed,
                  unsigned threads)
{
  const ScalarFunctional h = scalar_functional_by_name(h_name);
  const double d2 = h.d2h(1.0);
  if (d2 == 0.0)
    throw InvalidInput("degenerate normalization: h''(1) = 0 for '" + h_name +
                       "'");
  if (replications == 0)
    throw InvalidInput("uniform study: need at least one replication");
  const ScenarioSpec truth = ScenarioSpec::uniform(1.0, seed);

  std::vector<SimulationReport> reports;
  for (const std::size_t n : ns) {
    if (n < 2)
      throw InvalidInput("uniform study: n must be >= 2");
    const auto start = std::chrono::steady_clock::now();
    SimulationReport r;
    r.scenario = truth;
    r.functional = h.name;
    r.n = n;
    r.replications = replications;
    r.seed = seed;
    r.truth = h.h(1.0);
    r.sigma2_eff = 0.0;
    r.statistics.assign(replications, 0.0);
    r.raw.assign(replications, 0.0);

    const std::uint64_t base = derive_seed(seed, n);
    parallel_for(replications, threads, [&](std::size_t i) {
      RandomStream stream(derive_seed(base, i));
      const Sample s = draw(truth, n, stream);
      r.raw[i] = uniform_scaled_excess(h, s);
      r.statistics[i] = uniform_clt_standardize(r.raw[i], d2, n);
    });

    r.reference_kind = "normal";
    r.reference_normal = NormalLaw{ 0.0, 1.0 };
    r.summary = summarize(r.statistics, "normal", r.reference_normal, {});
    r.wall_seconds = seconds_since(start);
    reports.push_back(std::move(r));
  }
  return reports;
}

void
write_report(const SimulationReport& report, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out)
      throw InvalidInput("cannot write " + (dir / name).string());
    out << body;
  };
  write(report.stem() + "_statistics.csv", report.statistics_csv());
  write(report.stem() + "_qq.csv", report.qq_csv());
  write(report.stem() + "_summary.json", report.summary_json() + "\n");
  if (!report.reference_sample.empty()) {
    std::string body = "statistic\n";
    for (const double y : report.reference_sample)
      body += format_double(y) + "\n";
    write(report.reference_file, body);
  }
}

} // namespace grenfun
