#include "grenfun/grenander.hpp"

#include "grenfun/error.hpp"

#include <vector>

namespace grenfun {

PiecewiseLinearConcave
empirical_majorant(const Sample& s)
{
  if (!(s.max() > 0.0))
    throw InvalidInput("grenander: all observations are 0 (degenerate "
                       "support)");
  const auto steps = ecdf(s);
  std::vector<Point2> points;
  points.reserve(steps.size());
  for (const auto& p : steps)
    points.push_back({ p.x, p.height });
  return lcm(points, 0.0, s.max());
}

StepDensity
fit(const Sample& s)
{
  const PiecewiseLinearConcave hull = empirical_majorant(s);
  const auto knots = hull.knots();
  const auto heights = hull.values();

  // Each entry covers (start, end] of the majorant; merge neighbours whose
  // divided differences fail to decrease after rounding.
  struct Segment
  {
    std::size_t start;
    std::size_t end;
    double level;
  };
  std::vector<Segment> segments;
  segments.reserve(knots.size());
  auto level_of = [&](std::size_t a, std::size_t b) {
    return (heights[b] - heights[a]) / (knots[b] - knots[a]);
  };
  for (std::size_t k = 1; k < knots.size(); ++k) {
    Segment seg{ k - 1, k, level_of(k - 1, k) };
    while (!segments.empty() && !(seg.level < segments.back().level)) {
      seg.start = segments.back().start;
      seg.level = level_of(seg.start, seg.end);
      segments.pop_back();
    }
    segments.push_back(seg);
  }

  std::vector<double> breakpoints, levels;
  breakpoints.reserve(segments.size());
  levels.reserve(segments.size());
  for (const auto& seg : segments) {
    breakpoints.push_back(knots[seg.end]);
    levels.push_back(seg.level);
  }
  return StepDensity(std::move(breakpoints), std::move(levels));
}

} // namespace grenfun
