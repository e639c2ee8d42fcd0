#ifndef LRGD_LINALG_HPP
#define LRGD_LINALG_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace lrgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// f(theta) evaluated to a non-finite value.
class ObjectiveOverflowError : public Error {
public:
  ObjectiveOverflowError(const std::string& what, Vector point)
      : Error(what), point(std::move(point)) {}
  Vector point;
};

/// No usable derivative route (or finite differences hit non-finite values).
class OracleUnavailableError : public Error {
public:
  using Error::Error;
};

/// All sampled gradients were (numerically) zero.
class DegenerateSampleError : public Error {
public:
  using Error::Error;
};

/// Objective value increased for too many consecutive descent steps.
class DivergenceError : public Error {
public:
  using Error::Error;
};

/// Adaptive descent: residual direction vanished while the gradient guard
/// still fails, so the configured thresholds are inconsistent.
class StalledResidualError : public Error {
public:
  using Error::Error;
};

/// Point lies outside an objective's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

} // namespace lrgd

#endif
