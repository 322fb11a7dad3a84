#pragma once

#include <stdexcept>
#include <string>

namespace dcl {

/// Malformed arguments: bad simplices, out-of-range degrees, unsupported presets.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A simplex or mass matrix lost definiteness (zero volume, non-PD Gram).
class DegenerateMetric : public std::runtime_error {
 public:
  explicit DegenerateMetric(const std::string& what) : std::runtime_error(what) {}
};

/// Mass matrix of a pencil is not positive definite.
class MassDegenerate : public DegenerateMetric {
 public:
  explicit MassDegenerate(const std::string& what) : DegenerateMetric(what) {}
};

class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dcl
