#pragma once

#include "grenfun/functionals.hpp"
#include "grenfun/samples.hpp"
#include "grenfun/step_density.hpp"

#include <cstddef>
#include <string>

namespace grenfun {

struct ConfidenceInterval
{
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
  double sigma_hat = 0.0;
  std::size_t n = 0;
  /// sigma_hat == 0, so the interval collapsed to a point. Happens for a
  /// uniform truth, where the root-n limit is degenerate.
  bool degenerate = false;

  double width() const { return upper - lower; }

  /// {estimate, lower, upper, level, sigma_hat, n, degenerate}. Coverage is
  /// pointwise in the truth, not uniform; the JSON carries no claim beyond
  /// that.
  std::string to_json() const;
};

/// Var(h'(f(X))) with f = d, written as mu(z h'(z)^2) - mu(z h'(z))^2.
/// Clamped at 0; exactly 0 when h' takes one value on d's levels.
double sigma_eff_mu(const ScalarFunctional& h, const StepDensity& d);

/// Var(h'(f(X)) f(X) + h(f(X))) with f = d: the efficient variance for
/// the integral of h(f) f.
double sigma_eff_nu(const ScalarFunctional& h, const StepDensity& d);

/// Empirical variance of gdot(d(X_i), X_i) over the sample. Clamped at 0.
double sigma_eff_tau(const SmoothFunctional& g,
                     const Sample& s,
                     const StepDensity& d);

/// Wald interval mu(h, fit(s)) +- z sigma_hat / sqrt(n), with sigma_hat^2 =
/// sigma_eff_mu(h, fit(s)).
ConfidenceInterval ci_mu(const ScalarFunctional& h,
                         const Sample& s,
                         double level);

/// Same construction for tau(g, .), with sigma_hat^2 = sigma_eff_tau.
ConfidenceInterval ci_tau(const SmoothFunctional& g,
                          const Sample& s,
                          double level);

/// n (mu(h, fit(s)) - h(1)) for a sample presumed Uniform[0, 1]. The
/// plug-in integral runs over [0, max(1, max(s))].
double uniform_scaled_excess(const ScalarFunctional& h, const Sample& s);

/// (n (mu(h, fit(s)) - h(1)) - c log n) / sqrt(3 c^2 log n), c = h''(1)/2.
/// Asymptotically N(0, 1) under a Uniform[0, 1] truth. Throws InvalidInput
/// when h''(1) = 0 and when n < 2.
double uniform_clt_statistic(const ScalarFunctional& h, const Sample& s);

/// Standardization of a precomputed scaled excess.
double uniform_clt_standardize(double scaled_excess, double d2h_at_1,
                               std::size_t n);

} // namespace grenfun
