#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace grenfun {

struct Point2
{
  double x;
  double y;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Concave piecewise-linear function given by its knots.
///
/// Linear between knots, constant after the last knot (so a majorant of a
/// CDF stays at 1 past the largest observation). Not defined left of the
/// first knot. Consecutive slopes are nonincreasing; the representation
/// produced by lcm() has strictly decreasing slopes (no collinear knots).
class PiecewiseLinearConcave
{
public:
  PiecewiseLinearConcave(std::vector<double> knots, std::vector<double> values);

  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return knots_.size(); }

  double operator()(double x) const;

  /// slopes()[i] is the slope on [knots[i], knots[i+1]].
  std::vector<double> slopes() const;

  friend bool operator==(const PiecewiseLinearConcave&,
                         const PiecewiseLinearConcave&) = default;

private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Least concave majorant of the points lying in [a, b].
///
/// Points must be sorted by x; equal x values are pooled to their maximum
/// y. Points outside [a, b] are ignored. Upper hull by a single stack scan,
/// with orientation decided by cross products of (dx, dy) pairs. Collinear
/// points are dropped, so the knot set is the canonical minimal one.
PiecewiseLinearConcave
lcm(std::span<const Point2> points, double a, double b);

/// Values of a stochastic-process realization on a finite grid.
struct GridPath
{
  std::vector<double> grid;
  std::vector<double> values;

  GridPath() = default;
  GridPath(std::vector<double> grid, std::vector<double> values);

  std::size_t size() const { return grid.size(); }
  friend bool operator==(const GridPath&, const GridPath&) = default;
};

/// Index of `x` in the grid; throws InvalidInput if x is not a grid point.
std::size_t grid_index(std::span<const double> grid, double x);

/// Replaces the path on [a, b] by the least concave majorant of its grid
/// values there. Both endpoints must be grid points. Values outside [a, b]
/// are left untouched.
GridPath
restricted_lcm(const GridPath& path, double a, double b);

/// In-place variant on index range [first, last] of parallel arrays.
void
concave_majorize(std::span<const double> grid,
                 std::span<double> values,
                 std::size_t first,
                 std::size_t last);

} // namespace grenfun
