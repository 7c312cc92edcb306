#include "grenfun/error.hpp"
#include "grenfun/grenander.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace grenfun;
using Catch::Approx;

namespace {

std::vector<double>
vec(std::span<const double> s)
{
  return { s.begin(), s.end() };
}

} // namespace

TEST_CASE("fit: small samples", "[grenander]")
{
  const auto one = fit(ingest(std::vector<double>{ 1.0 }));
  CHECK(vec(one.breakpoints()) == std::vector<double>{ 1.0 });
  CHECK(vec(one.levels()) == std::vector<double>{ 1.0 });

  const auto pooled = fit(ingest(std::vector<double>{ 2.0, 3.0 }));
  CHECK(vec(pooled.breakpoints()) == std::vector<double>{ 3.0 });
  CHECK(pooled.levels()[0] == Approx(1.0 / 3.0).epsilon(1e-15));

  const auto concave = fit(ingest(std::vector<double>{ 1.0, 3.0 }));
  CHECK(vec(concave.breakpoints()) == std::vector<double>{ 1.0, 3.0 });
  CHECK(vec(concave.levels()) == std::vector<double>{ 0.5, 0.25 });

  CHECK_THROWS_AS(fit(ingest(std::vector<double>{ 0.0, 0.0 })), InvalidInput);
}

TEST_CASE("fit: observations at zero", "[grenander]")
{
  // (0, 1/3) becomes the origin; the remaining 2/3 spreads over (0, 2].
  const auto d = fit(ingest(std::vector<double>{ 0.0, 1.0, 2.0 }));
  CHECK(d.mass() == Approx(2.0 / 3.0).epsilon(1e-15));
  REQUIRE(d.pieces() == 1);
  CHECK(d.levels()[0] == Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("evaluate follows the left-continuous convention", "[grenander]")
{
  const StepDensity d({ 1.0, 3.0 }, { 0.5, 0.25 });
  CHECK(d(1.0) == 0.5);
  CHECK(d(1.0000001) == 0.25);
  CHECK(d(3.0) == 0.25);
  CHECK(d(4.0) == 0.0);
  CHECK(d(0.0) == 0.5);
  CHECK_THROWS_AS(d(-1e-9), InvalidInput);
}

TEST_CASE("step density validation and serialization", "[grenander]")
{
  CHECK_THROWS_AS(StepDensity({ 1.0, 1.0 }, { 0.5, 0.25 }), InvalidInput);
  CHECK_THROWS_AS(StepDensity({ 1.0, 2.0 }, { 0.5, 0.5 }), InvalidInput);
  CHECK_THROWS_AS(StepDensity({ 0.0 }, { 1.0 }), InvalidInput);
  CHECK_THROWS_AS(StepDensity({}, {}), InvalidInput);

  const StepDensity d({ 1.0, 3.0 }, { 0.5, 0.25 });
  CHECK(d.to_json() == R"({"breakpoints":[1.0,3.0],"levels":[0.5,0.25]})");
  CHECK(StepDensity::from_json(d.to_json()) == d);
  CHECK(d.to_csv() == "breakpoint,level\n1,0.5\n3,0.25\n");
}

TEST_CASE("fit has unit mass and ends at the sample maximum",
          "[grenander][property]")
{
  RandomStream rng(7);
  const ScenarioSpec scenarios[] = { ScenarioSpec::exponential(1.0),
                                     ScenarioSpec::two_level(),
                                     ScenarioSpec::uniform(2.0) };
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n =
      trial < 10 ? static_cast<std::size_t>(trial + 1) : 1 + rng.bits() % 10000;
    const Sample s = draw(scenarios[trial % 3], n, rng);
    const StepDensity d = fit(s);
    CHECK(d.mass() == Approx(1.0).margin(1e-10));
    CHECK(d.support_end() == s.max());
    for (const double t : d.breakpoints())
      CHECK(std::binary_search(s.values().begin(), s.values().end(), t));
  }
}

TEST_CASE("fit levels are the slopes of the empirical majorant",
          "[grenander][property]")
{
  RandomStream rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Sample s =
      draw(ScenarioSpec::exponential(1.0), 1 + rng.bits() % 2000, rng);
    const auto hull = lcm(
      [&] {
        std::vector<Point2> pts;
        for (const auto& p : ecdf(s))
          pts.push_back({ p.x, p.height });
        return pts;
      }(),
      0.0, s.max());
    CHECK(fit(s).levels().size() == hull.slopes().size());
    CHECK(vec(fit(s).levels()) == hull.slopes());
  }
}

TEST_CASE("fit agrees with pool-adjacent-violators", "[grenander][property]")
{
  RandomStream rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const bool ties = trial % 4 == 0;
    std::vector<double> raw(1 + rng.bits() % 500);
    for (auto& v : raw) {
      v = -std::log1p(-rng.uniform());
      if (ties)
        v = std::ceil(v * 8.0) / 8.0;
    }
    const Sample s = ingest(std::move(raw));
    const StepDensity d = fit(s);
    const auto ref = oracle::pava_grenander(s);
    for (std::size_t j = 0; j < ref.level.size(); ++j) {
      const double mid = 0.5 * (ref.left[j] + ref.right[j]);
      CHECK(d(mid) == Approx(ref.level[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("refitting on a fitted density's own cdf is idempotent",
          "[grenander][property]")
{
  RandomStream rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const StepDensity d =
      fit(draw(ScenarioSpec::two_level(), 10 + rng.bits() % 3000, rng));
    std::vector<Point2> pts{ { 0.0, 0.0 } };
    for (const double t : d.breakpoints())
      pts.push_back({ t, d.cdf(t) });
    const auto again = lcm(pts, 0.0, d.support_end());
    REQUIRE(again.slopes().size() == d.pieces());
    for (std::size_t i = 0; i < d.pieces(); ++i)
      CHECK(again.slopes()[i] == Approx(d.levels()[i]).epsilon(1e-12));
  }
}
