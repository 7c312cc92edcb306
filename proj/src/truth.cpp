#include "grenfun/truth.hpp"

#include "grenfun/error.hpp"

#include <algorithm>

namespace grenfun {

namespace {

// Integral of k(f(x), x) f(x)^power over the support.
template<class Kernel>
double
integrate_truth(const ScenarioSpec& truth, Kernel k, int power)
{
  const QuadratureOptions quad{ 16, 1e-13, 12 };
  auto weight = [power](double f) {
    double w = 1.0;
    for (int i = 0; i < power; ++i)
      w *= f;
    return w;
  };
  if (truth.is_step()) {
    const StepDensity& d = truth.step_density();
    double total = 0.0;
    for (std::size_t i = 0; i < d.pieces(); ++i) {
      const double v = d.levels()[i];
      total += integrate([&](double x) { return k(v, x) * weight(v); },
                         d.piece_start(i), d.piece_end(i), quad);
    }
    return total;
  }
  const double end = 2.0 * truth.quantile(1.0 - 0x1p-53);
  // Split at a few mass quantiles so the panels follow the decay.
  const double cuts[] = { 0.0,
                          truth.quantile(0.5),
                          truth.quantile(0.9),
                          truth.quantile(0.99),
                          truth.quantile(0.9999),
                          truth.quantile(1.0 - 1e-8),
                          truth.quantile(1.0 - 1e-12),
                          end };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < std::size(cuts); ++i)
    total += integrate(
      [&](double x) {
        const double f = truth.density(x);
        return k(f, x) * weight(f);
      },
      cuts[i], cuts[i + 1], quad);
  return total;
}

} // namespace

double
true_tau(const SmoothFunctional& g, const ScenarioSpec& truth)
{
  if (!g.zero_at_origin)
    throw InvalidInput("true value of '" + g.name +
                       "' diverges: g(0, x) is not identically 0");
  return integrate_truth(truth, g.g, 0);
}

double
true_sigma2(const SmoothFunctional& g, const ScenarioSpec& truth)
{
  const double second = integrate_truth(
    truth, [&](double z, double x) { return g.gdot(z, x) * g.gdot(z, x); }, 1);
  const double first = integrate_truth(truth, g.gdot, 1);
  return std::max(0.0, second - first * first);
}

} // namespace grenfun
