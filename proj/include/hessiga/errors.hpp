#pragma once

#include <stdexcept>
#include <string>

namespace hessiga {

/// Invalid argument values (degrees, indices, shapes, levels).
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Degenerate or otherwise unusable geometry.
class GeometryError : public std::runtime_error {
public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure while building a numerical object (singular local system, size guard).
class ConstructionError : public std::runtime_error {
public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

/// Linear solver detected an exactly singular system.
class SingularityError : public std::runtime_error {
public:
  explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hessiga
