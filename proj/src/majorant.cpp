#include "grenfun/majorant.hpp"

#include "grenfun/error.hpp"

#include <algorithm>
#include <cmath>

namespace grenfun {

namespace {

// True when `mid` lies strictly above the chord from `left` to `right`,
// i.e. slope(left, mid) > slope(left, right).
inline bool
strictly_above(double lx, double ly, double mx, double my, double rx, double ry)
{
  return (my - ly) * (rx - lx) > (ry - ly) * (mx - lx);
}

// Upper hull of sorted, x-distinct points; returns indices of the vertices.
template<class XAt, class YAt>
std::vector<std::size_t>
upper_hull(std::size_t first, std::size_t last, XAt x, YAt y)
{
  std::vector<std::size_t> hull;
  hull.reserve(last - first + 1);
  for (std::size_t i = first; i <= last; ++i) {
    while (hull.size() >= 2) {
      const std::size_t l = hull[hull.size() - 2];
      const std::size_t m = hull.back();
      if (strictly_above(x(l), y(l), x(m), y(m), x(i), y(i)))
        break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

} // namespace

PiecewiseLinearConcave::PiecewiseLinearConcave(std::vector<double> knots,
                                               std::vector<double> values)
  : knots_(std::move(knots))
  , values_(std::move(values))
{
  if (knots_.empty() || knots_.size() != values_.size())
    throw InvalidInput("piecewise linear: need equally many (>= 1) knots "
                       "and values");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i]))
      throw InvalidInput("piecewise linear: non-finite knot or value");
    if (i > 0 && !(knots_[i] > knots_[i - 1]))
      throw InvalidInput("piecewise linear: knots must strictly increase");
  }
  for (std::size_t i = 2; i < knots_.size(); ++i) {
    const double dx0 = knots_[i - 1] - knots_[i - 2];
    const double dy0 = values_[i - 1] - values_[i - 2];
    const double dx1 = knots_[i] - knots_[i - 1];
    const double dy1 = values_[i] - values_[i - 1];
    if (dy0 * dx1 < dy1 * dx0)
      throw InvalidInput("piecewise linear: slopes must be nonincreasing");
  }
}

double
PiecewiseLinearConcave::operator()(double x) const
{
  if (x < knots_.front())
    throw InvalidInput("piecewise linear: evaluation left of first knot");
  if (x >= knots_.back())
    return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (x == knots_[k])
    return values_[k];
  const double t = (x - knots_[k]) / (knots_[k + 1] - knots_[k]);
  return values_[k] + t * (values_[k + 1] - values_[k]);
}

std::vector<double>
PiecewiseLinearConcave::slopes() const
{
  std::vector<double> out;
  out.reserve(knots_.size() - 1);
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
    out.push_back((values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]));
  return out;
}

PiecewiseLinearConcave
lcm(std::span<const Point2> points, double a, double b)
{
  if (!(a <= b))
    throw InvalidInput("lcm: empty interval");
  std::vector<Point2> pooled;
  pooled.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point2 p = points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidInput("lcm: non-finite coordinate at index " +
                         std::to_string(i));
    if (i > 0 && p.x < points[i - 1].x)
      throw InvalidInput("lcm: points must be sorted by x");
    if (p.x < a || p.x > b)
      continue;
    if (!pooled.empty() && pooled.back().x == p.x)
      pooled.back().y = std::max(pooled.back().y, p.y);
    else
      pooled.push_back(p);
  }
  if (pooled.empty())
    throw InvalidInput("lcm: no points in the interval");

  const auto hull = upper_hull(
    0,
    pooled.size() - 1,
    [&](std::size_t i) { return pooled[i].x; },
    [&](std::size_t i) { return pooled[i].y; });
  std::vector<double> knots, values;
  knots.reserve(hull.size());
  values.reserve(hull.size());
  for (const std::size_t i : hull) {
    knots.push_back(pooled[i].x);
    values.push_back(pooled[i].y);
  }
  return PiecewiseLinearConcave(std::move(knots), std::move(values));
}

GridPath::GridPath(std::vector<double> g, std::vector<double> v)
  : grid(std::move(g))
  , values(std::move(v))
{
  if (grid.size() < 2 || grid.size() != values.size())
    throw InvalidInput("grid path: need equally many (>= 2) grid points and "
                       "values");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw InvalidInput("grid path: grid must strictly increase");
}

std::size_t
grid_index(std::span<const double> grid, double x)
{
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.end() || *it != x)
    throw InvalidInput("point is not on the grid");
  return static_cast<std::size_t>(it - grid.begin());
}

void
concave_majorize(std::span<const double> grid,
                 std::span<double> values,
                 std::size_t first,
                 std::size_t last)
{
  if (last <= first + 1)
    return;
  const auto hull = upper_hull(
    first,
    last,
    [&](std::size_t i) { return grid[i]; },
    [&](std::size_t i) { return values[i]; });
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t l = hull[h];
    const std::size_t r = hull[h + 1];
    const double xl = grid[l], yl = values[l];
    const double xr = grid[r], yr = values[r];
    for (std::size_t i = l + 1; i < r; ++i) {
      const double t = (grid[i] - xl) / (xr - xl);
      // Collinear points can round a hair below themselves on the chord.
      values[i] = std::max(values[i], yl + t * (yr - yl));
    }
  }
}

GridPath
restricted_lcm(const GridPath& path, double a, double b)
{
  if (!(a <= b))
    throw InvalidInput("restricted lcm: empty interval");
  const std::size_t first = grid_index(path.grid, a);
  const std::size_t last = grid_index(path.grid, b);
  GridPath out = path;
  concave_majorize(out.grid, out.values, first, last);
  return out;
}

} // namespace grenfun
