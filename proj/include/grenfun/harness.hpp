#pragma once

#include "grenfun/functionals.hpp"
#include "grenfun/samples.hpp"
#include "grenfun/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace grenfun {

/// Runs body(i) for i in [0, count) on `threads` workers pulling indices
/// from a shared counter. Results must be stored by index. The first
/// exception thrown by a worker is rethrown after all workers join.
void parallel_for(std::size_t count,
                  unsigned threads,
                  const std::function<void(std::size_t)>& body);

enum class ReferenceKind
{
  automatic,
  normal,
  limit
};

struct StudyConfig
{
  ScenarioSpec scenario = ScenarioSpec::exponential(1.0);
  std::string functional = "power:2";
  std::vector<std::size_t> ns{ 5000 };
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
  /// automatic: normal(0, sigma^2_eff) when the limit is known to be
  /// normal (x-free functional, or strictly concave truth), otherwise an
  /// empirical sample from the limit-law simulator.
  ReferenceKind reference = ReferenceKind::automatic;
  std::size_t limit_draws = 10000;
  std::size_t grid_cells = 2000;
  double ci_level = 0.95;

  /// Keys: scenario (object), functional, n (number or array),
  /// replications, seed, reference ("auto" | "normal" | "limit"),
  /// limit_draws, grid_cells, ci_level. A missing seed falls back to the
  /// scenario's seed.
  static StudyConfig from_json(const std::string& text);
};

struct StudySummary
{
  double mean = 0.0;
  double variance = 0.0;
  double ks = 0.0;
  std::vector<std::pair<double, double>> qq;
  /// |mean| <= 5 sqrt(variance / replications). When false the mean is a
  /// finite-n bias worth reporting, not noise.
  bool mean_within_noise = true;
};

struct SimulationReport
{
  ScenarioSpec scenario = ScenarioSpec::exponential(1.0);
  std::string functional;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  double truth = 0.0;
  double sigma2_eff = 0.0;

  /// sqrt(n) (estimate - truth) per replication, by replication index.
  std::vector<double> statistics;
  /// sqrt(n) (estimate - truth) / sigma_hat, sigma_hat estimated per
  /// replication (NaN where sigma_hat = 0).
  std::vector<double> studentized;
  /// Fraction of replications whose Wald interval covered the truth.
  double ci_coverage = 0.0;
  double ci_level = 0.95;

  /// Uniform-truth studies only: n (mu - h(1)) per replication.
  std::vector<double> raw;

  std::string reference_kind; // "normal" or "limit"
  NormalLaw reference_normal;
  std::vector<double> reference_sample;
  std::string reference_file;

  StudySummary summary;
  double wall_seconds = 0.0;

  std::string summary_json() const;
  /// "replication,statistic" rows, 17 significant digits.
  std::string statistics_csv() const;
  /// "reference_quantile,sample_quantile" rows.
  std::string qq_csv() const;
  /// File stem shared by this report's outputs.
  std::string stem() const;
};

std::vector<SimulationReport> run_study(const StudyConfig& config,
                                        unsigned threads = 1);

/// Uniform[0, 1] truth; statistics are the standardized values of
/// uniform_clt_statistic, reference N(0, 1).
std::vector<SimulationReport> run_uniform_study(const std::string& h_name,
                                                const std::vector<std::size_t>& ns,
                                                std::size_t replications,
                                                std::uint64_t seed,
                                                unsigned threads = 1);

/// `draws` samples from the limit law of sqrt(n)(tau(g, fhat) - tau(g, f)).
/// Draw i uses its own stream derived from (seed, i).
struct LimitSampleResult
{
  std::vector<double> draws;
  double truncation = 0.0;
  double tail_bound = 0.0;
};
LimitSampleResult sample_limit_law(const SmoothFunctional& g,
                                   const ScenarioSpec& truth,
                                   std::size_t draws,
                                   std::size_t grid_cells,
                                   std::uint64_t seed,
                                   unsigned threads = 1);

/// Single-column CSV preceded by one "# {json}" metadata line.
std::string limit_sample_csv(const LimitSampleResult& result,
                             const std::string& metadata_json);

/// Writes <stem>_statistics.csv, <stem>_qq.csv, <stem>_summary.json (and
/// the empirical reference sample under reference_file, when there is one)
/// into dir.
void write_report(const SimulationReport& report,
                  const std::filesystem::path& dir);

/// Replaces characters unsafe in file names.
std::string file_safe(std::string name);

} // namespace grenfun
