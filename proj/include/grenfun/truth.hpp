#pragma once

#include "grenfun/functionals.hpp"
#include "grenfun/samples.hpp"

namespace grenfun {

/// tau(g, f) for the scenario's true density: exact per-piece sums or
/// quadrature for step densities, composite Gauss-Legendre over
/// [0, 2 F^{-1}(1 - 2^-53)] for the exponential. g must vanish at z = 0.
double true_tau(const SmoothFunctional& g, const ScenarioSpec& truth);

/// Var(gdot(f(X), X)) under the scenario's true density.
double true_sigma2(const SmoothFunctional& g, const ScenarioSpec& truth);

} // namespace grenfun
