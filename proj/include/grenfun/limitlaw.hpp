#pragma once

#include "grenfun/functionals.hpp"
#include "grenfun/majorant.hpp"
#include "grenfun/random.hpp"
#include "grenfun/samples.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace grenfun {

enum class Concavity
{
  strictly_concave,
  piecewise_affine
};

/// True CDF of a scenario together with the regions where it is affine.
struct TrueModel
{
  ScenarioSpec scenario;
  Concavity concavity;
  /// 0 = t_0 < t_1 < ... < t_k: F is affine on each [t_{i-1}, t_i] with
  /// strictly decreasing slopes. Empty for strictly concave models.
  std::vector<double> affine_breaks;

  /// Exponential -> strictly concave; step densities -> piecewise affine
  /// with the density's breakpoints.
  static TrueModel from_scenario(const ScenarioSpec& spec);

  /// End of the simulated range: the support end, or F^{-1}(1 - 1e-6)
  /// for unbounded supports.
  double truncation() const;
};

inline constexpr double kTailProbability = 1e-6;

/// Brownian bridge on a grid of [0, 1] that starts at 0 and ends at 1:
/// Brownian motion from independent Gaussian increments, then
/// B(t) = W(t) - t W(1). The endpoint values are exactly 0.
GridPath bridge_path(std::span<const double> grid, RandomStream& stream);

/// Directional derivative of the least concave majorant operator at the
/// true CDF, applied to a path of G = B o F. The identity for strictly
/// concave models; otherwise the path is majorized separately on each
/// affine interval (and on [t_k, end] if the grid runs past the support),
/// so values at the t_i are unchanged. Every t_i inside the grid range
/// must be a grid point.
GridPath hadamard_lcm_derivative(const TrueModel& model, const GridPath& path);

/// Draws of Y = -int Ghat(x) d[gdot(f(x), x)].
///
/// The x-grid is `cells` equal cells on [0, truncation] merged with the
/// affine breaks. The Stieltjes sum evaluates Ghat at left endpoints for
/// the continuous part of psi(x) = gdot(f(x), x) and adds the jumps of psi
/// at the breaks exactly, using Ghat(t_i) = G(t_i).
class LimitLawSampler
{
public:
  LimitLawSampler(SmoothFunctional g, TrueModel model, std::size_t cells);

  double draw(RandomStream& stream);

  /// Y for a given path of G on grid(); applies the derivative first.
  double evaluate(std::span<const double> g_values) const;

  std::span<const double> grid() const { return grid_; }
  /// F on grid(), plus a closing 1 when F(truncation) < 1.
  std::span<const double> bridge_grid() const { return u_grid_; }
  const TrueModel& model() const { return model_; }

  /// Total variation of psi beyond the truncation point; sup |Ghat| times
  /// this bounds the neglected part of the integral. 0 for bounded support.
  double tail_variation() const { return tail_variation_; }

  /// Largest |Ghat| seen over all draws so far.
  double max_abs_path() const { return max_abs_path_; }

private:
  void apply_derivative(std::span<double> values) const;

  SmoothFunctional g_;
  TrueModel model_;
  std::vector<double> grid_;
  std::vector<double> u_grid_;
  std::vector<double> weights_;
  std::vector<std::size_t> break_index_;
  double tail_variation_ = 0.0;
  double max_abs_path_ = 0.0;
  std::vector<double> scratch_;
};

/// One draw of Y (builds a sampler; prefer LimitLawSampler for loops).
double sample_y(const SmoothFunctional& g,
                const TrueModel& model,
                std::size_t cells,
                RandomStream& stream);

/// Y through the linear formula -sum_i G(t_i) [psi(t_i+) - psi(t_i-)]
/// for x-free g and a piecewise-affine model: the bridge is sampled only
/// at F(t_i), with no majorant step. Throws InvalidInput otherwise.
class LinearLimitSampler
{
public:
  LinearLimitSampler(const SmoothFunctional& g, const TrueModel& model);
  double draw(RandomStream& stream) const;

private:
  std::vector<double> u_grid_;
  std::vector<double> jumps_;
};

} // namespace grenfun
