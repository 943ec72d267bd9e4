#pragma once

#include <stdexcept>
#include <string>

namespace rjd {

/// Invalid experiment configuration or numerical parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A quantity is mathematically undefined for the given inputs
/// (divergent MGF, missing certificate, unavailable constant).
class NumericError : public std::domain_error {
 public:
  explicit NumericError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace rjd
