#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace grenfun {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule
{
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Newton iteration on the Legendre recurrence, to machine precision.
  explicit GaussLegendreRule(std::size_t order);

  std::size_t order() const { return nodes.size(); }

  /// Fixed-rule estimate of the integral of f over [a, b].
  double integrate(const std::function<double(double)>& f,
                   double a,
                   double b) const;
};

struct QuadratureOptions
{
  std::size_t order = 16;
  double rel_tol = 1e-10;
  int max_refinements = 10;
};

/// Composite Gauss-Legendre with repeated bisection: the panel count
/// doubles until two successive estimates agree to rel_tol, or the
/// refinement cap is hit (the last estimate is returned either way).
double integrate(const std::function<double(double)>& f,
                 double a,
                 double b,
                 const QuadratureOptions& opts = {});

} // namespace grenfun
