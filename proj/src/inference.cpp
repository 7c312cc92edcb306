#include "grenfun/inference.hpp"

#include "grenfun/error.hpp"
#include "grenfun/grenander.hpp"
#include "grenfun/normal.hpp"
#include "summation.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

namespace grenfun {

namespace {

// Variance of a(f(X)) for X with step density d: sum of w_i a_i^2 minus
// (sum of w_i a_i)^2, w_i = level * width.
template<class Score>
double
step_variance(const StepDensity& d, Score score)
{
  std::vector<double> a(d.pieces());
  for (std::size_t i = 0; i < d.pieces(); ++i)
    a[i] = score(d.levels()[i]);
  if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; }))
    return 0.0;
  detail::CompensatedSum second, first;
  for (std::size_t i = 0; i < d.pieces(); ++i) {
    const double w = d.levels()[i] * d.piece_width(i);
    second.add(w * a[i] * a[i]);
    first.add(w * a[i]);
  }
  return std::max(0.0, second.value() - first.value() * first.value());
}

ConfidenceInterval
wald(double estimate, double variance, std::size_t n, double level)
{
  if (!(level > 0.0 && level < 1.0))
    throw InvalidInput("confidence level must lie in (0, 1)");
  ConfidenceInterval ci;
  ci.estimate = estimate;
  ci.level = level;
  ci.n = n;
  ci.sigma_hat = std::sqrt(variance);
  ci.degenerate = ci.sigma_hat == 0.0;
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double half = z * ci.sigma_hat / std::sqrt(static_cast<double>(n));
  ci.lower = estimate - half;
  ci.upper = estimate + half;
  return ci;
}

} // namespace

std::string
ConfidenceInterval::to_json() const
{
  nlohmann::json j;
  j["estimate"] = estimate;
  j["lower"] = lower;
  j["upper"] = upper;
  j["level"] = level;
  j["sigma_hat"] = sigma_hat;
  j["n"] = n;
  j["degenerate"] = degenerate;
  return j.dump();
}

double
sigma_eff_mu(const ScalarFunctional& h, const StepDensity& d)
{
  return step_variance(d, [&](double z) { return h.dh(z); });
}

double
sigma_eff_nu(const ScalarFunctional& h, const StepDensity& d)
{
  return step_variance(d, [&](double z) { return h.dh(z) * z + h.h(z); });
}

double
sigma_eff_tau(const SmoothFunctional& g, const Sample& s, const StepDensity& d)
{
  const auto values = s.values();
  std::vector<double> scores(values.size());
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    scores[i] = g.gdot(d(values[i]), values[i]);
    sum.add(scores[i]);
  }
  const double n = static_cast<double>(values.size());
  const double mean = sum.value() / n;
  detail::CompensatedSum sq;
  for (const double v : scores)
    sq.add((v - mean) * (v - mean));
  return std::max(0.0, sq.value() / n);
}

ConfidenceInterval
ci_mu(const ScalarFunctional& h, const Sample& s, double level)
{
  const StepDensity d = fit(s);
  return wald(mu_plugin(h, d), sigma_eff_mu(h, d), s.size(), level);
}

ConfidenceInterval
ci_tau(const SmoothFunctional& g, const Sample& s, double level)
{
  const StepDensity d = fit(s);
  return wald(tau_plugin(g, d), sigma_eff_tau(g, s, d), s.size(), level);
}

double
uniform_scaled_excess(const ScalarFunctional& h, const Sample& s)
{
  const StepDensity d = fit(s);
  const double end = std::max(1.0, d.support_end());
  const double n = static_cast<double>(s.size());
  return n * (mu_plugin(h, d, end) - h.h(1.0));
}

double
uniform_clt_standardize(double scaled_excess, double d2h_at_1, std::size_t n)
{
  if (d2h_at_1 == 0.0)
    throw InvalidInput("degenerate normalization: h''(1) = 0");
  if (n < 2)
    throw InvalidInput("uniform statistic needs n >= 2");
  const double c = 0.5 * d2h_at_1;
  const double log_n = std::log(static_cast<double>(n));
  return (scaled_excess - c * log_n) / std::sqrt(3.0 * c * c * log_n);
}

double
uniform_clt_statistic(const ScalarFunctional& h, const Sample& s)
{
  const double d2 = h.d2h(1.0);
  if (d2 == 0.0)
    throw InvalidInput("degenerate normalization: h''(1) = 0");
  return uniform_clt_standardize(uniform_scaled_excess(h, s), d2, s.size());
}

} // namespace grenfun
