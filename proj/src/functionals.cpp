#include "grenfun/functionals.hpp"

#include "grenfun/error.hpp"
#include "grenfun/random.hpp"
#include "summation.hpp"

#include <cmath>
#include <sstream>

namespace grenfun {

namespace {

constexpr int kDerivativeChecks = 32;
constexpr double kDerivativeTol = 1e-4;
constexpr std::uint64_t kDerivativeCheckSeed = 0x5eed'dec0'de01ULL;

void
check_derivative(const std::string& name,
                 const std::string& which,
                 const RealFn& f,
                 const RealFn& df,
                 double z)
{
  const double step = 1e-5 * std::max(1.0, std::abs(z));
  const double fd = (f(z + step) - f(z - step)) / (2.0 * step);
  const double exact = df(z);
  if (!std::isfinite(exact) ||
      std::abs(fd - exact) > kDerivativeTol * std::max(1.0, std::abs(exact))) {
    std::ostringstream msg;
    msg << "functional '" << name << "': " << which << " at z=" << z << " is "
        << exact << " but finite differences give " << fd;
    throw InvalidInput(msg.str());
  }
}

// Check points stay one FD step inside [0, z_max].
double
interior_point(RandomStream& rng, double hi)
{
  const double margin = 1e-3 * hi;
  return margin + (hi - 2.0 * margin) * rng.uniform();
}

double
power_term(double coef, double z, double exponent)
{
  return coef == 0.0 ? 0.0 : coef * std::pow(z, exponent);
}

} // namespace

ScalarFunctional
ScalarFunctional::make(std::string name,
                       RealFn h,
                       RealFn dh,
                       RealFn d2h,
                       RealFn d3h,
                       RealFn d4h,
                       double z_max)
{
  if (!h || !dh || !d2h)
    throw InvalidInput("functional '" + name + "': h, h', h'' are required");
  RandomStream rng(kDerivativeCheckSeed);
  for (int i = 0; i < kDerivativeChecks; ++i) {
    const double z = interior_point(rng, z_max);
    check_derivative(name, "h'", h, dh, z);
    check_derivative(name, "h''", dh, d2h, z);
    if (d3h)
      check_derivative(name, "h'''", d2h, d3h, z);
    if (d3h && d4h)
      check_derivative(name, "h''''", d3h, d4h, z);
  }
  return ScalarFunctional{ std::move(name), std::move(h),   std::move(dh),
                           std::move(d2h),  std::move(d3h), std::move(d4h) };
}

SmoothFunctional
SmoothFunctional::make(std::string name,
                       BivariateFn g,
                       BivariateFn gdot,
                       BivariateFn gddot,
                       bool zero_at_origin,
                       double z_max,
                       double x_max)
{
  if (!g || !gdot || !gddot)
    throw InvalidInput("functional '" + name + "': g, g', g'' are required");
  RandomStream rng(kDerivativeCheckSeed);
  for (int i = 0; i < kDerivativeChecks; ++i) {
    const double z = interior_point(rng, z_max);
    const double x = x_max * rng.uniform();
    check_derivative(
      name, "dg/dz", [&](double t) { return g(t, x); },
      [&](double t) { return gdot(t, x); }, z);
    check_derivative(
      name, "d2g/dz2", [&](double t) { return gdot(t, x); },
      [&](double t) { return gddot(t, x); }, z);
  }
  SmoothFunctional out;
  out.name = std::move(name);
  out.g = std::move(g);
  out.gdot = std::move(gdot);
  out.gddot = std::move(gddot);
  out.zero_at_origin = zero_at_origin;
  return out;
}

SmoothFunctional
SmoothFunctional::from_scalar(const ScalarFunctional& h)
{
  SmoothFunctional out;
  out.name = h.name;
  out.g = [f = h.h](double z, double) { return f(z); };
  out.gdot = [f = h.dh](double z, double) { return f(z); };
  out.gddot = [f = h.d2h](double z, double) { return f(z); };
  out.zero_at_origin = h.h(0.0) == 0.0;
  out.x_free = true;
  return out;
}

ScalarFunctional
power_functional(double p)
{
  if (!(p >= 1.0) || !std::isfinite(p))
    throw InvalidInput("power functional: exponent must be >= 1");
  std::ostringstream name;
  name << "power:" << p;
  return ScalarFunctional::make(
    name.str(),
    [p](double z) { return std::pow(z, p); },
    [p](double z) { return power_term(p, z, p - 1.0); },
    [p](double z) { return power_term(p * (p - 1.0), z, p - 2.0); },
    [p](double z) { return power_term(p * (p - 1.0) * (p - 2.0), z, p - 3.0); },
    [p](double z) {
      return power_term(p * (p - 1.0) * (p - 2.0) * (p - 3.0), z, p - 4.0);
    });
}

ScalarFunctional
scalar_functional_by_name(const std::string& name)
{
  if (name == "identity") {
    auto f = power_functional(1.0);
    f.name = "identity";
    return f;
  }
  if (name.rfind("power:", 0) == 0) {
    const std::string arg = name.substr(6);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size())
      throw InvalidInput("functional '" + name + "': bad exponent");
    return power_functional(p);
  }
  throw InvalidInput("unknown functional '" + name +
                     "' (valid: power:p, identity)");
}

SmoothFunctional
smooth_functional_by_name(const std::string& name)
{
  if (name == "xz2")
    return SmoothFunctional::make(
      "xz2",
      [](double z, double x) { return x * z * z; },
      [](double z, double x) { return 2.0 * x * z; },
      [](double, double x) { return 2.0 * x; },
      true);
  if (name == "identity" || name.rfind("power:", 0) == 0)
    return SmoothFunctional::from_scalar(scalar_functional_by_name(name));
  throw InvalidInput("unknown functional '" + name +
                     "' (valid: power:p, identity, xz2)");
}

namespace {

double
tail_end(const StepDensity& d, std::optional<double> domain_end, bool vanishes)
{
  if (!domain_end) {
    if (!vanishes)
      throw InvalidInput("divergent tail: the integrand is nonzero where the "
                         "density vanishes; declare a compact domain");
    return d.support_end();
  }
  if (!(*domain_end >= d.support_end()))
    throw InvalidInput("integration domain ends inside the support");
  return *domain_end;
}

} // namespace

double
mu_plugin(const ScalarFunctional& h,
          const StepDensity& d,
          std::optional<double> domain_end)
{
  const double h0 = h.h(0.0);
  const double end = tail_end(d, domain_end, h0 == 0.0);
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < d.pieces(); ++i)
    total.add(h.h(d.levels()[i]) * d.piece_width(i));
  if (end > d.support_end())
    total.add(h0 * (end - d.support_end()));
  return total.value();
}

double
tau_plugin(const SmoothFunctional& g,
           const StepDensity& d,
           std::optional<double> domain_end,
           const QuadratureOptions& quad)
{
  const double end = tail_end(d, domain_end, g.zero_at_origin);
  detail::CompensatedSum total;
  if (g.x_free) {
    for (std::size_t i = 0; i < d.pieces(); ++i)
      total.add(g.g(d.levels()[i], 0.0) * d.piece_width(i));
    if (end > d.support_end())
      total.add(g.g(0.0, 0.0) * (end - d.support_end()));
    return total.value();
  }
  for (std::size_t i = 0; i < d.pieces(); ++i) {
    const double level = d.levels()[i];
    total.add(integrate([&](double x) { return g.g(level, x); },
                        d.piece_start(i), d.piece_end(i), quad));
  }
  if (end > d.support_end() && !g.zero_at_origin)
    total.add(integrate([&](double x) { return g.g(0.0, x); },
                        d.support_end(), end, quad));
  return total.value();
}

double
nu_plugin(const ScalarFunctional& h, const StepDensity& d)
{
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < d.pieces(); ++i) {
    const double v = d.levels()[i];
    total.add(h.h(v) * (v * d.piece_width(i)));
  }
  return total.value();
}

double
empirical_average(const ScalarFunctional& h,
                  const Sample& s,
                  const StepDensity& d)
{
  detail::CompensatedSum total;
  for (const double x : s.values())
    total.add(h.h(d(x)));
  return total.value() / static_cast<double>(s.size());
}

double
one_step_correction(const ScalarFunctional& h,
                    const Sample& s,
                    const StepDensity& d)
{
  const auto phi = [&](double z) { return h.h(z) + z * h.dh(z); };
  detail::CompensatedSum empirical;
  for (const double x : s.values())
    empirical.add(phi(d(x)));
  detail::CompensatedSum model;
  for (std::size_t i = 0; i < d.pieces(); ++i) {
    const double v = d.levels()[i];
    model.add(phi(v) * (v * d.piece_width(i)));
  }
  return empirical.value() / static_cast<double>(s.size()) - model.value();
}

double
one_step_estimate(const ScalarFunctional& h,
                  const Sample& s,
                  const StepDensity& d)
{
  return nu_plugin(h, d) + one_step_correction(h, s, d);
}

} // namespace grenfun
