#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace grenfun {

/// Nonincreasing piecewise-constant density on [0, inf).
///
/// The density equals levels[i] on (breakpoints[i-1], breakpoints[i]] with
/// an implicit breakpoint 0 before the first piece, and is 0 beyond the last
/// breakpoint. At x = 0 it takes the first level (the f(0+) convention).
///
/// Invariants checked on construction: at least one piece, breakpoints
/// strictly increasing and positive, levels strictly decreasing and
/// positive, everything finite. Total mass is not forced to 1 here; fitted
/// and scenario densities guarantee it at their own construction sites.
class StepDensity
{
public:
  StepDensity(std::vector<double> breakpoints, std::vector<double> levels);

  std::size_t pieces() const { return levels_.size(); }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> levels() const { return levels_; }

  /// Left end of piece i (0 for the first piece).
  double piece_start(std::size_t i) const
  {
    return i == 0 ? 0.0 : breakpoints_[i - 1];
  }
  double piece_end(std::size_t i) const { return breakpoints_[i]; }
  double piece_width(std::size_t i) const
  {
    return piece_end(i) - piece_start(i);
  }
  double support_end() const { return breakpoints_.back(); }

  /// Sum of level * width over pieces.
  double mass() const;

  /// Density value; throws InvalidInput for x < 0.
  double operator()(double x) const;

  /// Distribution function of the density, integrated from 0.
  double cdf(double x) const;

  /// JSON object {"breakpoints": [...], "levels": [...]}.
  std::string to_json() const;
  /// Two-column CSV with header "breakpoint,level".
  std::string to_csv() const;
  static StepDensity from_json(const std::string& text);

  friend bool operator==(const StepDensity&, const StepDensity&) = default;

private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

} // namespace grenfun
