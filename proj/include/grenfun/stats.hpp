#pragma once

#include <span>
#include <utility>
#include <vector>

namespace grenfun {

struct NormalLaw
{
  double mean = 0.0;
  double variance = 1.0;
};

double mean(std::span<const double> xs);
/// Unbiased (n - 1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

/// sup |F_sample - Phi((x - mean) / sd)|. A zero-variance reference is a
/// point mass at its mean.
double ks_distance(std::span<const double> sample, const NormalLaw& ref);

/// Two-sample sup-distance between empirical CDFs.
double ks_distance(std::span<const double> sample,
                   std::span<const double> reference);

/// (reference quantile, sample quantile) at p = 1/100, ..., 99/100.
std::vector<std::pair<double, double>>
qq_pairs(std::span<const double> sample, const NormalLaw& ref);
std::vector<std::pair<double, double>>
qq_pairs(std::span<const double> sample, std::span<const double> reference);

} // namespace grenfun
