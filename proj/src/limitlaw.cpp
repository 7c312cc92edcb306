#include "grenfun/limitlaw.hpp"

#include "grenfun/error.hpp"

#include <algorithm>
#include <cmath>

namespace grenfun {

TrueModel
TrueModel::from_scenario(const ScenarioSpec& spec)
{
  if (!spec.is_step())
    return TrueModel{ spec, Concavity::strictly_concave, {} };
  std::vector<double> breaks{ 0.0 };
  const auto bp = spec.step_density().breakpoints();
  breaks.insert(breaks.end(), bp.begin(), bp.end());
  return TrueModel{ spec, Concavity::piecewise_affine, std::move(breaks) };
}

double
TrueModel::truncation() const
{
  const double end = scenario.support_end();
  if (std::isfinite(end))
    return end;
  return scenario.quantile(1.0 - kTailProbability);
}

namespace {

void
fill_bridge(std::span<const double> grid,
            std::span<double> out,
            RandomStream& stream)
{
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw InvalidInput("bridge grid must run from 0 to 1");
  out[0] = 0.0;
  double w = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double dt = grid[j] - grid[j - 1];
    if (!(dt > 0.0))
      throw InvalidInput("bridge grid must strictly increase");
    w += std::sqrt(dt) * stream.normal();
    out[j] = w;
  }
  const double w1 = out.back();
  for (std::size_t j = 1; j + 1 < grid.size(); ++j)
    out[j] -= grid[j] * w1;
  out.back() = 0.0;
}

} // namespace

GridPath
bridge_path(std::span<const double> grid, RandomStream& stream)
{
  std::vector<double> values(grid.size());
  fill_bridge(grid, values, stream);
  return GridPath(std::vector<double>(grid.begin(), grid.end()),
                  std::move(values));
}

namespace {

// Index ranges [first, last] of the affine intervals that lie on the grid,
// plus the flat stretch past the support if the grid reaches it.
std::vector<std::pair<std::size_t, std::size_t>>
affine_ranges(const TrueModel& model, std::span<const double> grid)
{
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  if (model.concavity == Concavity::strictly_concave)
    return ranges;
  std::vector<std::size_t> idx;
  for (const double t : model.affine_breaks) {
    if (t > grid.back())
      throw InvalidInput("grid does not cover the affine breaks");
    idx.push_back(grid_index(grid, t));
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    ranges.emplace_back(idx[i - 1], idx[i]);
  if (idx.back() + 1 < grid.size())
    ranges.emplace_back(idx.back(), grid.size() - 1);
  return ranges;
}

} // namespace

GridPath
hadamard_lcm_derivative(const TrueModel& model, const GridPath& path)
{
  GridPath out = path;
  for (const auto& [first, last] : affine_ranges(model, out.grid))
    concave_majorize(out.grid, out.values, first, last);
  return out;
}

LimitLawSampler::LimitLawSampler(SmoothFunctional g,
                                 TrueModel model,
                                 std::size_t cells)
  : g_(std::move(g))
  , model_(std::move(model))
{
  if (cells == 0)
    throw InvalidInput("limit sampler: need at least one grid cell");
  const double end = model_.truncation();
  grid_.reserve(cells + 1 + model_.affine_breaks.size());
  for (std::size_t j = 0; j <= cells; ++j)
    grid_.push_back(j == cells ? end
                               : end * static_cast<double>(j) /
                                   static_cast<double>(cells));
  for (const double t : model_.affine_breaks)
    grid_.push_back(t);
  std::sort(grid_.begin(), grid_.end());
  grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());

  const bool step = model_.scenario.is_step();
  u_grid_.resize(grid_.size());
  for (std::size_t j = 0; j < grid_.size(); ++j)
    u_grid_[j] = model_.scenario.cdf(grid_[j]);
  u_grid_.front() = 0.0;
  if (step)
    u_grid_.back() = 1.0;
  else
    u_grid_.push_back(1.0);

  // Density level on the cell (x_j, x_{j+1}); cells never straddle breaks.
  auto cell_level = [&](std::size_t j) {
    return model_.scenario.density(0.5 * (grid_[j] + grid_[j + 1]));
  };
  weights_.assign(grid_.size(), 0.0);
  for (std::size_t j = 0; j + 1 < grid_.size(); ++j) {
    double increment = 0.0;
    if (step) {
      const double v = cell_level(j);
      increment = g_.gdot(v, grid_[j + 1]) - g_.gdot(v, grid_[j]);
    } else {
      const double a = grid_[j], b = grid_[j + 1];
      increment = g_.gdot(model_.scenario.density(b), b) -
                  g_.gdot(model_.scenario.density(a), a);
    }
    weights_[j] -= increment;
  }
  if (step) {
    const StepDensity& d = model_.scenario.step_density();
    for (std::size_t i = 0; i < d.pieces(); ++i) {
      const double t = d.piece_end(i);
      const double after = i + 1 < d.pieces() ? d.levels()[i + 1] : 0.0;
      const double jump = g_.gdot(after, t) - g_.gdot(d.levels()[i], t);
      const std::size_t k = grid_index(grid_, t);
      weights_[k] -= jump;
      break_index_.push_back(k);
    }
  } else {
    // Variation of psi past the truncation point, on a fine grid out to
    // three times F^{-1}(1 - 1e-15).
    const double far = model_.scenario.quantile(1.0 - 1e-15) * 3.0;
    constexpr int kTailCells = 4096;
    double prev = g_.gdot(model_.scenario.density(end), end);
    for (int j = 1; j <= kTailCells; ++j) {
      const double x = end + (far - end) * j / kTailCells;
      const double cur = g_.gdot(model_.scenario.density(x), x);
      tail_variation_ += std::abs(cur - prev);
      prev = cur;
    }
  }
  scratch_.resize(u_grid_.size());
}

void
LimitLawSampler::apply_derivative(std::span<double> values) const
{
  if (model_.concavity == Concavity::strictly_concave)
    return;
  for (const auto& [first, last] : affine_ranges(model_, grid_))
    concave_majorize(grid_, values, first, last);
}

double
LimitLawSampler::evaluate(std::span<const double> g_values) const
{
  if (g_values.size() != grid_.size())
    throw InvalidInput("limit sampler: path does not match the grid");
  std::vector<double> values(g_values.begin(), g_values.end());
  apply_derivative(values);
  double y = 0.0;
  for (std::size_t j = 0; j < grid_.size(); ++j)
    y += weights_[j] * values[j];
  return y;
}

double
LimitLawSampler::draw(RandomStream& stream)
{
  fill_bridge(u_grid_, scratch_, stream);
  std::span<double> values(scratch_.data(), grid_.size());
  apply_derivative(values);
  double y = 0.0;
  double peak = 0.0;
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    y += weights_[j] * values[j];
    peak = std::max(peak, std::abs(values[j]));
  }
  max_abs_path_ = std::max(max_abs_path_, peak);
  return y;
}

double
sample_y(const SmoothFunctional& g,
         const TrueModel& model,
         std::size_t cells,
         RandomStream& stream)
{
  LimitLawSampler sampler(g, model, cells);
  return sampler.draw(stream);
}

LinearLimitSampler::LinearLimitSampler(const SmoothFunctional& g,
                                       const TrueModel& model)
{
  if (!g.x_free || model.concavity != Concavity::piecewise_affine)
    throw InvalidInput("linear limit formula needs an x-free functional and "
                       "a piecewise-affine model");
  const StepDensity& d = model.scenario.step_density();
  u_grid_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < d.pieces(); ++i) {
    u_grid_.push_back(model.scenario.cdf(d.piece_end(i)));
    jumps_.push_back(g.gdot(d.levels()[i + 1], 0.0) -
                     g.gdot(d.levels()[i], 0.0));
  }
  u_grid_.push_back(1.0);
}

double
LinearLimitSampler::draw(RandomStream& stream) const
{
  std::vector<double> bridge(u_grid_.size());
  fill_bridge(u_grid_, bridge, stream);
  double y = 0.0;
  for (std::size_t i = 0; i < jumps_.size(); ++i)
    y -= bridge[i + 1] * jumps_[i];
  return y;
}

} // namespace grenfun
