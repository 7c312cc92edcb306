#include "grenfun/quadrature.hpp"

#include "grenfun/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace grenfun {

GaussLegendreRule::GaussLegendreRule(std::size_t order)
  : nodes(order)
  , weights(order)
{
  if (order == 0)
    throw InvalidInput("gauss-legendre: order must be >= 1");
  const std::size_t half = (order + 1) / 2;
  const double n = static_cast<double>(order);
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi's initial guess for the i-th root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16)
        break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

double
GaussLegendreRule::integrate(const std::function<double(double)>& f,
                             double a,
                             double b) const
{
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    sum += weights[i] * f(mid + half * nodes[i]);
  return half * sum;
}

namespace {

const GaussLegendreRule&
cached_rule(std::size_t order)
{
  static std::mutex mutex;
  static std::map<std::size_t, GaussLegendreRule> rules;
  std::lock_guard lock(mutex);
  auto it = rules.find(order);
  if (it == rules.end())
    it = rules.emplace(order, GaussLegendreRule(order)).first;
  return it->second;
}

} // namespace

double
integrate(const std::function<double(double)>& f,
          double a,
          double b,
          const QuadratureOptions& opts)
{
  if (a == b)
    return 0.0;
  const GaussLegendreRule& rule = cached_rule(opts.order);
  double previous = rule.integrate(f, a, b);
  std::size_t panels = 1;
  for (int level = 1; level <= opts.max_refinements; ++level) {
    panels *= 2;
    const double width = (b - a) / static_cast<double>(panels);
    double current = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = a + width * static_cast<double>(p);
      const double hi = p + 1 == panels ? b : lo + width;
      current += rule.integrate(f, lo, hi);
    }
    const double scale = std::max(std::abs(current), 1e-300);
    if (std::abs(current - previous) <= opts.rel_tol * scale)
      return current;
    previous = current;
  }
  return previous;
}

} // namespace grenfun
