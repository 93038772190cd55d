#pragma once

#include <stdexcept>
#include <string>

namespace leoroute {

// Invalid constellation, model or grid parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A link was requested between two nodes that are not ISL neighbours.
class TopologyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A ground link was requested while the satellite is below the elevation mask.
class VisibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No end-to-end route exists at some sampled instant.
class NoRouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Set-cover infeasibility or a violated cover precondition.
class CoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario file problems (missing file, syntax, validation).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace leoroute
