#pragma once

#include "grenfun/majorant.hpp"
#include "grenfun/samples.hpp"
#include "grenfun/step_density.hpp"

namespace grenfun {

/// Least concave majorant of the empirical CDF of `s` over [0, max(s)].
PiecewiseLinearConcave empirical_majorant(const Sample& s);

/// Grenander estimator: the left-hand slopes of the least concave majorant
/// of the empirical CDF.
///
/// Breakpoints are observed values and the last one is max(s); pieces with
/// equal slope are merged. Mass is 1 up to rounding, except that
/// observations equal to 0 start the majorant at (0, zeros/n) and the
/// fitted density then carries mass 1 - zeros/n on (0, max(s)].
/// Throws InvalidInput if every observation is 0.
StepDensity fit(const Sample& s);

} // namespace grenfun
