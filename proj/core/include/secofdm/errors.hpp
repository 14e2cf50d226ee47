#pragma once

#include <stdexcept>
#include <string>

namespace secofdm {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration, malformed scenario files, bad argument shapes.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Iterative numerics failed to converge or hit an invalid state.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// A power-allocation target cannot be met within the power budget.
// best_achievable_mse reports the MSE reached when the entire budget is spent.
class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string& what, double best_achievable_mse)
      : Error(what), best_achievable_mse(best_achievable_mse) {}
  double best_achievable_mse;
};

// Filesystem failures, annotated with the offending path.
class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace secofdm
