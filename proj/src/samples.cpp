#include "grenfun/samples.hpp"

#include "grenfun/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>

namespace grenfun {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};

void
check_observations(std::span<const double> raw)
{
  if (raw.empty())
    throw InvalidInput("sample: no observations");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i]))
      throw InvalidInput("sample: non-finite observation at index " +
                         std::to_string(i));
    if (raw[i] < 0.0)
      throw InvalidInput("sample: negative observation at index " +
                         std::to_string(i));
  }
}

StepDensity
pwa_density()
{
  const double r2 = std::numbers::sqrt2;
  return StepDensity({ 1.0 - 1.0 / r2, 1.0 }, { r2 + 1.0, r2 - 1.0 });
}

} // namespace

Sample
ingest(std::span<const double> raw)
{
  return ingest(std::vector<double>(raw.begin(), raw.end()));
}

Sample
ingest(std::vector<double>&& raw)
{
  check_observations(raw);
  std::sort(raw.begin(), raw.end());
  return Sample(std::move(raw));
}

Sample
read_sample_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw InvalidInput("cannot open data file " + path.string());
  std::vector<double> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(line.substr(first), &used);
    } catch (const std::exception&) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) +
                         ": not a number");
    }
    const auto rest = line.find_first_not_of(" \t\r", first + used);
    if (rest != std::string::npos)
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) +
                         ": trailing characters");
    raw.push_back(value);
  }
  return ingest(std::move(raw));
}

std::vector<EcdfPoint>
ecdf(const Sample& s)
{
  const auto values = s.values();
  const double n = static_cast<double>(values.size());
  std::vector<EcdfPoint> points;
  if (values.front() > 0.0)
    points.push_back({ 0.0, 0.0 });
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i])
      continue;
    points.push_back({ values[i], static_cast<double>(i + 1) / n });
  }
  return points;
}

ScenarioSpec::ScenarioSpec(ScenarioLaw law, std::uint64_t seed)
  : law_(std::move(law))
  , seed_(seed)
{
  std::visit(
    overloaded{
      [](const ExponentialLaw& e) {
        if (!(e.rate > 0.0) || !std::isfinite(e.rate))
          throw InvalidInput("exponential: rate must be positive");
      },
      [this](const UniformLaw& u) {
        if (!(u.upper > 0.0) || !std::isfinite(u.upper))
          throw InvalidInput("uniform: upper endpoint must be positive");
        step_.emplace(std::vector<double>{ u.upper },
                      std::vector<double>{ 1.0 / u.upper });
      },
      [this](const PiecewiseConstantLaw& p) {
        StepDensity d(p.breakpoints, p.levels);
        if (std::abs(d.mass() - 1.0) > 1e-12)
          throw InvalidInput("piecewise_constant: total mass must be 1");
        step_.emplace(std::move(d));
      },
      [this](const TwoLevelLaw&) { step_.emplace(pwa_density()); },
    },
    law_);
}

ScenarioSpec
ScenarioSpec::exponential(double rate, std::uint64_t seed)
{
  return ScenarioSpec(ExponentialLaw{ rate }, seed);
}

ScenarioSpec
ScenarioSpec::uniform(double upper, std::uint64_t seed)
{
  return ScenarioSpec(UniformLaw{ upper }, seed);
}

ScenarioSpec
ScenarioSpec::piecewise_constant(std::vector<double> breakpoints,
                                 std::vector<double> levels,
                                 std::uint64_t seed)
{
  return ScenarioSpec(
    PiecewiseConstantLaw{ std::move(breakpoints), std::move(levels) }, seed);
}

ScenarioSpec
ScenarioSpec::two_level(std::uint64_t seed)
{
  return ScenarioSpec(TwoLevelLaw{}, seed);
}

std::string
ScenarioSpec::kind_name() const
{
  return std::visit(overloaded{
                      [](const ExponentialLaw&) { return "exponential"; },
                      [](const UniformLaw&) { return "uniform"; },
                      [](const PiecewiseConstantLaw&) {
                        return "piecewise_constant";
                      },
                      [](const TwoLevelLaw&) { return "paper_pwa"; },
                    },
                    law_);
}

ScenarioSpec
ScenarioSpec::from_json(const std::string& text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("scenario json: ") + e.what());
  }
  try {
    const auto kind = j.at("kind").get<std::string>();
    const auto params = j.value("params", nlohmann::json::object());
    const auto seed = j.value("seed", std::uint64_t{ 0 });
    if (kind == "exponential")
      return exponential(params.value("rate", 1.0), seed);
    if (kind == "uniform")
      return uniform(params.value("c", 1.0), seed);
    if (kind == "piecewise_constant")
      return piecewise_constant(
        params.at("breakpoints").get<std::vector<double>>(),
        params.at("levels").get<std::vector<double>>(),
        seed);
    if (kind == "paper_pwa")
      return two_level(seed);
    throw InvalidInput("unknown scenario kind '" + kind +
                       "' (valid: exponential, uniform, piecewise_constant, "
                       "paper_pwa)");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("scenario json: ") + e.what());
  }
}

std::string
ScenarioSpec::to_json() const
{
  nlohmann::json params = nlohmann::json::object();
  std::visit(overloaded{
               [&](const ExponentialLaw& e) { params["rate"] = e.rate; },
               [&](const UniformLaw& u) { params["c"] = u.upper; },
               [&](const PiecewiseConstantLaw& p) {
                 params["breakpoints"] = p.breakpoints;
                 params["levels"] = p.levels;
               },
               [](const TwoLevelLaw&) {},
             },
             law_);
  nlohmann::json j;
  j["kind"] = kind_name();
  j["params"] = params;
  j["seed"] = seed_;
  return j.dump();
}

double
ScenarioSpec::cdf(double x) const
{
  if (const auto* e = std::get_if<ExponentialLaw>(&law_))
    return x <= 0.0 ? 0.0 : -std::expm1(-e->rate * x);
  return std::min(1.0, step_->cdf(x));
}

double
ScenarioSpec::quantile(double u) const
{
  if (const auto* e = std::get_if<ExponentialLaw>(&law_))
    return -std::log1p(-u) / e->rate;
  const StepDensity& d = *step_;
  double below = 0.0;
  for (std::size_t i = 0; i < d.pieces(); ++i) {
    const double piece_mass = d.levels()[i] * d.piece_width(i);
    if (u < below + piece_mass || i + 1 == d.pieces()) {
      const double x = d.piece_start(i) + (u - below) / d.levels()[i];
      return std::clamp(x, d.piece_start(i), d.piece_end(i));
    }
    below += piece_mass;
  }
  return d.support_end();
}

double
ScenarioSpec::density(double x) const
{
  if (const auto* e = std::get_if<ExponentialLaw>(&law_))
    return x < 0.0 ? 0.0 : e->rate * std::exp(-e->rate * x);
  return (*step_)(x);
}

double
ScenarioSpec::support_end() const
{
  if (std::holds_alternative<ExponentialLaw>(law_))
    return INFINITY;
  return step_->support_end();
}

const StepDensity&
ScenarioSpec::step_density() const
{
  if (!step_)
    throw InvalidInput("scenario '" + kind_name() +
                       "' has no step-density form");
  return *step_;
}

Sample
draw(const ScenarioSpec& spec, std::size_t n, RandomStream& stream)
{
  if (n == 0)
    throw InvalidInput("draw: n must be >= 1");
  std::vector<double> values(n);
  for (auto& v : values)
    v = spec.quantile(stream.uniform());
  return ingest(std::move(values));
}

Sample
draw(const ScenarioSpec& spec, std::size_t n)
{
  RandomStream stream(spec.seed());
  return draw(spec, n, stream);
}

} // namespace grenfun
