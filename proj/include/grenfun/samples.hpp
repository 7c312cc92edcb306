#pragma once

#include "grenfun/random.hpp"
#include "grenfun/step_density.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace grenfun {

/// Sorted nonnegative observations, duplicates retained.
class Sample
{
public:
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  friend bool operator==(const Sample&, const Sample&) = default;

private:
  explicit Sample(std::vector<double> sorted)
    : values_(std::move(sorted))
  {}
  std::vector<double> values_;

  friend Sample ingest(std::span<const double> raw);
  friend Sample ingest(std::vector<double>&& raw);
};

/// Validates and sorts raw observations. Rejects empty input and any
/// negative or non-finite entry (the message names the index).
Sample ingest(std::span<const double> raw);
Sample ingest(std::vector<double>&& raw);

/// Reads one observation per line; blank lines and lines starting with '#'
/// are skipped.
Sample read_sample_file(const std::filesystem::path& path);

struct EcdfPoint
{
  double x;
  double height;
  friend bool operator==(const EcdfPoint&, const EcdfPoint&) = default;
};

/// Jump points of the empirical CDF, one per distinct observation, with
/// cumulative height count/n. The origin (0, 0) is prepended unless some
/// observations equal 0, in which case the first point is (0, zeros/n).
std::vector<EcdfPoint> ecdf(const Sample& s);

// Scenario kinds. All have closed-form inverse CDFs.
struct ExponentialLaw
{
  double rate = 1.0;
};
struct UniformLaw
{
  double upper = 1.0;
};
struct PiecewiseConstantLaw
{
  std::vector<double> breakpoints;
  std::vector<double> levels;
};
/// The two-piece concave CDF with a kink at 1 - 1/sqrt(2): slope
/// 1/(sqrt(2) - 1) before the kink and sqrt(2) - 1 after, support [0, 1].
struct TwoLevelLaw
{};

using ScenarioLaw =
  std::variant<ExponentialLaw, UniformLaw, PiecewiseConstantLaw, TwoLevelLaw>;

/// A data-generating truth with a nonincreasing density, plus its seed.
class ScenarioSpec
{
public:
  ScenarioSpec(ScenarioLaw law, std::uint64_t seed = 0);

  static ScenarioSpec exponential(double rate, std::uint64_t seed = 0);
  static ScenarioSpec uniform(double upper, std::uint64_t seed = 0);
  static ScenarioSpec piecewise_constant(std::vector<double> breakpoints,
                                         std::vector<double> levels,
                                         std::uint64_t seed = 0);
  /// sqrt(2) + 1 on (0, 1 - 1/sqrt(2)], sqrt(2) - 1 on (1 - 1/sqrt(2), 1].
  /// JSON kind "paper_pwa".
  static ScenarioSpec two_level(std::uint64_t seed = 0);

  /// {"kind": ..., "params": {...}, "seed": ...}. Kinds: "exponential"
  /// (rate), "uniform" (c), "piecewise_constant" (breakpoints, levels),
  /// "paper_pwa".
  static ScenarioSpec from_json(const std::string& text);
  std::string to_json() const;

  const ScenarioLaw& law() const { return law_; }
  std::uint64_t seed() const { return seed_; }
  std::string kind_name() const;
  /// Short label for file names, e.g. "exponential" or "paper_pwa".
  std::string label() const { return kind_name(); }

  double cdf(double x) const;
  double quantile(double u) const;
  double density(double x) const;
  /// Right end of the support; +inf for the exponential.
  double support_end() const;

  /// True density as a step function, for every kind except exponential.
  bool is_step() const { return step_.has_value(); }
  const StepDensity& step_density() const;

private:
  ScenarioLaw law_;
  std::uint64_t seed_;
  std::optional<StepDensity> step_;
};

/// n i.i.d. draws by inverse-CDF transform, consuming exactly n uniforms
/// from the stream.
Sample draw(const ScenarioSpec& spec, std::size_t n, RandomStream& stream);

/// Convenience: a fresh stream seeded from spec.seed().
Sample draw(const ScenarioSpec& spec, std::size_t n);

} // namespace grenfun
