#pragma once

#include <stdexcept>
#include <string>

namespace grenfun {

/// Bad input: malformed data, invalid configuration, unknown names.
/// The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument
{
public:
  explicit InvalidInput(const std::string& what)
    : std::invalid_argument(what)
  {}
};

/// A numerical procedure could not produce a meaningful result.
/// The CLI maps this to exit code 3.
class NumericFailure : public std::runtime_error
{
public:
  explicit NumericFailure(const std::string& what)
    : std::runtime_error(what)
  {}
};

} // namespace grenfun
