#pragma once

namespace grenfun {

/// Standard normal distribution function.
double normal_cdf(double x);

/// Standard normal quantile for p in (0, 1).
///
/// Acklam's rational approximation followed by one Halley step against
/// erfc, which brings the error from ~1e-9 down to a few ulps.
/// Returns -inf / +inf at p = 0 / 1; throws InvalidInput outside [0, 1].
double normal_quantile(double p);

} // namespace grenfun
