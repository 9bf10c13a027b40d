#pragma once

#include <stdexcept>
#include <string>

namespace qsense {

/// Cost table carries no signal (E[m^2] vanishes): no linear slope exists.
class DegenerateDistributionError : public std::runtime_error {
public:
  explicit DegenerateDistributionError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Fewer data points than the requested fit or integration rule needs.
class InsufficientDataError : public std::runtime_error {
public:
  explicit InsufficientDataError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Posterior is as wide as the prior: the measurement adds nothing,
/// so per-cycle clock uncertainty is undefined.
class NoInformationError : public std::runtime_error {
public:
  explicit NoInformationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Mean spin length is (numerically) zero; no transverse frame exists.
class UndefinedOrientationError : public std::runtime_error {
public:
  explicit UndefinedOrientationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// The sampling backend gave up (e.g. a refreeze storm exceeded the retry cap).
class EvaluatorFailureError : public std::runtime_error {
public:
  explicit EvaluatorFailureError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace qsense
