#pragma once

#include "grenfun/quadrature.hpp"
#include "grenfun/samples.hpp"
#include "grenfun/step_density.hpp"

#include <functional>
#include <optional>
#include <string>

namespace grenfun {

using RealFn = std::function<double(double)>;
using BivariateFn = std::function<double(double, double)>;

/// h(z) with its first two derivatives; the third and fourth are optional
/// (only the uniform-truth statistic and smoothness checks use them).
///
/// Construct through make(), which checks the supplied derivatives against
/// central finite differences at 32 fixed pseudo-random points of
/// [0, z_max] and throws InvalidInput on a mismatch above 1e-4 relative.
struct ScalarFunctional
{
  std::string name;
  RealFn h;
  RealFn dh;
  RealFn d2h;
  RealFn d3h;
  RealFn d4h;

  static ScalarFunctional make(std::string name,
                               RealFn h,
                               RealFn dh,
                               RealFn d2h,
                               RealFn d3h = {},
                               RealFn d4h = {},
                               double z_max = 4.0);
};

/// g(z, x) with derivatives in z.
///
/// `zero_at_origin` declares g(0, x) = 0 for every x, which makes the tail
/// beyond the support of a step density vanish. `x_free` declares that g
/// does not depend on x. Construct through make() or from_scalar(); the
/// derivative check is the same as for ScalarFunctional, over
/// [0, z_max] x [0, x_max].
struct SmoothFunctional
{
  std::string name;
  BivariateFn g;
  BivariateFn gdot;
  BivariateFn gddot;
  bool zero_at_origin = false;
  bool x_free = false;

  static SmoothFunctional make(std::string name,
                               BivariateFn g,
                               BivariateFn gdot,
                               BivariateFn gddot,
                               bool zero_at_origin,
                               double z_max = 4.0,
                               double x_max = 4.0);

  /// g(z, x) = h(z).
  static SmoothFunctional from_scalar(const ScalarFunctional& h);
};

/// h(z) = z^p, p >= 1.
ScalarFunctional power_functional(double p);

/// Built-in names: "power:p", "identity" (h(z) = z).
ScalarFunctional scalar_functional_by_name(const std::string& name);

/// Built-in names: the scalar ones plus "xz2" (g(z, x) = x z^2).
SmoothFunctional smooth_functional_by_name(const std::string& name);

/// Integral of h(d(x)) over [0, inf), or over [0, domain_end] when given.
/// Without a domain, h(0) must be 0 (otherwise the tail diverges).
double mu_plugin(const ScalarFunctional& h,
                 const StepDensity& d,
                 std::optional<double> domain_end = std::nullopt);

/// Integral of g(d(x), x). Per-piece composite Gauss-Legendre; exact sum
/// when g is x-free. Same tail contract as mu_plugin.
double tau_plugin(const SmoothFunctional& g,
                  const StepDensity& d,
                  std::optional<double> domain_end = std::nullopt,
                  const QuadratureOptions& quad = {});

/// Integral of h(d(x)) d(x): the mean of h(d(X)) under d itself.
double nu_plugin(const ScalarFunctional& h, const StepDensity& d);

/// (1/n) sum h(d(X_i)).
double empirical_average(const ScalarFunctional& h,
                         const Sample& s,
                         const StepDensity& d);

/// Bias correction of the one-step estimator built on d:
/// mean over the sample of phi(d(X_i)) minus the mean of phi(d(X)) under
/// d, with phi(z) = h(z) + z h'(z). Zero when d is the Grenander fit of s.
double one_step_correction(const ScalarFunctional& h,
                           const Sample& s,
                           const StepDensity& d);

/// nu_plugin(h, d) + one_step_correction(h, s, d).
double one_step_estimate(const ScalarFunctional& h,
                         const Sample& s,
                         const StepDensity& d);

} // namespace grenfun
