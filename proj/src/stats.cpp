#include "grenfun/stats.hpp"

#include "grenfun/error.hpp"
#include "grenfun/normal.hpp"
#include "summation.hpp"

#include <algorithm>
#include <cmath>

namespace grenfun {

namespace {

std::vector<double>
sorted_copy(std::span<const double> xs)
{
  if (xs.empty())
    throw InvalidInput("statistics of an empty sample");
  std::vector<double> out(xs.begin(), xs.end());
  std::sort(out.begin(), out.end());
  return out;
}

double
normal_law_cdf(const NormalLaw& ref, double x)
{
  if (ref.variance <= 0.0)
    return x < ref.mean ? 0.0 : 1.0;
  return normal_cdf((x - ref.mean) / std::sqrt(ref.variance));
}

constexpr int kQqPoints = 99;

} // namespace

double
mean(std::span<const double> xs)
{
  if (xs.empty())
    throw InvalidInput("mean of an empty sample");
  detail::CompensatedSum sum;
  for (const double x : xs)
    sum.add(x);
  return sum.value() / static_cast<double>(xs.size());
}

double
sample_variance(std::span<const double> xs)
{
  if (xs.size() < 2)
    return 0.0;
  const double m = mean(xs);
  detail::CompensatedSum sum;
  for (const double x : xs)
    sum.add((x - m) * (x - m));
  return sum.value() / static_cast<double>(xs.size() - 1);
}

double
sorted_quantile(std::span<const double> sorted, double p)
{
  if (sorted.empty())
    throw InvalidInput("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
}

double
ks_distance(std::span<const double> sample, const NormalLaw& ref)
{
  const auto xs = sorted_copy(sample);
  const double n = static_cast<double>(xs.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i])
      ++j;
    const double f = normal_law_cdf(ref, xs[i]);
    // For a point-mass reference the left limit of its CDF matters too.
    const double f_left =
      ref.variance <= 0.0 ? (xs[i] <= ref.mean ? 0.0 : 1.0) : f;
    sup = std::max(sup, std::abs(f_left - static_cast<double>(i) / n));
    sup = std::max(sup, std::abs(static_cast<double>(j) / n - f));
    i = j;
  }
  return std::min(sup, 1.0);
}

double
ks_distance(std::span<const double> sample, std::span<const double> reference)
{
  const auto a = sorted_copy(sample);
  const auto b = sorted_copy(reference);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x)
      ++i;
    while (j < b.size() && b[j] == x)
      ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
  }
  return sup;
}

std::vector<std::pair<double, double>>
qq_pairs(std::span<const double> sample, const NormalLaw& ref)
{
  const auto xs = sorted_copy(sample);
  const double sd = std::sqrt(std::max(ref.variance, 0.0));
  std::vector<std::pair<double, double>> out;
  out.reserve(kQqPoints);
  for (int k = 1; k <= kQqPoints; ++k) {
    const double p = k / 100.0;
    out.emplace_back(ref.mean + sd * normal_quantile(p),
                     sorted_quantile(xs, p));
  }
  return out;
}

std::vector<std::pair<double, double>>
qq_pairs(std::span<const double> sample, std::span<const double> reference)
{
  const auto xs = sorted_copy(sample);
  const auto rs = sorted_copy(reference);
  std::vector<std::pair<double, double>> out;
  out.reserve(kQqPoints);
  for (int k = 1; k <= kQqPoints; ++k) {
    const double p = k / 100.0;
    out.emplace_back(sorted_quantile(rs, p), sorted_quantile(xs, p));
  }
  return out;
}

} // namespace grenfun
