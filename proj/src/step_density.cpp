#include "grenfun/step_density.hpp"

#include "grenfun/error.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

namespace grenfun {

StepDensity::StepDensity(std::vector<double> breakpoints,
                         std::vector<double> levels)
  : breakpoints_(std::move(breakpoints))
  , levels_(std::move(levels))
{
  if (levels_.empty() || levels_.size() != breakpoints_.size())
    throw InvalidInput("step density: need equally many (>= 1) breakpoints "
                       "and levels");
  double prev_t = 0.0;
  double prev_v = INFINITY;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const double t = breakpoints_[i];
    const double v = levels_[i];
    if (!std::isfinite(t) || !std::isfinite(v))
      throw InvalidInput("step density: non-finite breakpoint or level");
    if (!(t > prev_t))
      throw InvalidInput("step density: breakpoints must be positive and "
                         "strictly increasing");
    if (!(v > 0.0) || !(v < prev_v))
      throw InvalidInput("step density: levels must be positive and "
                         "strictly decreasing");
    prev_t = t;
    prev_v = v;
  }
}

double
StepDensity::mass() const
{
  double total = 0.0;
  for (std::size_t i = 0; i < pieces(); ++i)
    total += levels_[i] * piece_width(i);
  return total;
}

double
StepDensity::operator()(double x) const
{
  if (!(x >= 0.0))
    throw InvalidInput("step density: evaluation point must be >= 0");
  if (x == 0.0)
    return levels_.front();
  // First breakpoint >= x owns x, since pieces are closed on the right.
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.end())
    return 0.0;
  return levels_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double
StepDensity::cdf(double x) const
{
  if (x <= 0.0)
    return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < pieces(); ++i) {
    if (x <= piece_end(i))
      return total + levels_[i] * (x - piece_start(i));
    total += levels_[i] * piece_width(i);
  }
  return total;
}

std::string
StepDensity::to_json() const
{
  nlohmann::json j;
  j["breakpoints"] = breakpoints_;
  j["levels"] = levels_;
  return j.dump();
}

std::string
StepDensity::to_csv() const
{
  std::ostringstream out;
  out.precision(17);
  out << "breakpoint,level\n";
  for (std::size_t i = 0; i < pieces(); ++i)
    out << breakpoints_[i] << ',' << levels_[i] << '\n';
  return out.str();
}

StepDensity
StepDensity::from_json(const std::string& text)
{
  try {
    const auto j = nlohmann::json::parse(text);
    return StepDensity(j.at("breakpoints").get<std::vector<double>>(),
                       j.at("levels").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("step density json: ") + e.what());
  }
}

} // namespace grenfun
