#ifndef LRGD_OBJECTIVE_HPP
#define LRGD_OBJECTIVE_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "lrgd/linalg.hpp"

namespace lrgd {

/// Unit-norm direction in parameter space. The norm is validated on
/// construction so directional derivatives are always taken along unit
/// vectors.
class Direction {
public:
  explicit Direction(Vector coords) : coords_(std::move(coords)) {
    const double n = coords_.norm();
    if (std::abs(n - 1.0) > 1e-12)
      throw Error("Direction: vector is not unit norm (|norm-1| = " +
                  std::to_string(std::abs(n - 1.0)) + ")");
  }

  /// Normalizes an arbitrary nonzero vector into a direction.
  static Direction normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
      throw Error("Direction::normalized: zero or non-finite vector");
    return Direction(Vector(v / n));
  }

  static Direction axis(Eigen::Index dim, Eigen::Index i) {
    Vector e = Vector::Zero(dim);
    e[i] = 1.0;
    return Direction(std::move(e));
  }

  const Vector& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

private:
  Vector coords_;
};

/// A differentiable scalar objective on R^p.
///
/// value_fn is mandatory; grad_fn / dderiv_fn / hess_fn are optional analytic
/// routes. Smoothness (L), strong convexity (mu), the optimal value (f_star)
/// and a known gradient-span rank are metadata used by the descent engines
/// and the test zoo; they are not validated beyond basic sign checks.
struct Objective {
  int dim = 0;
  std::function<double(const Vector&)> value_fn;
  std::function<Vector(const Vector&)> grad_fn;
  std::function<double(const Vector&, const Direction&)> dderiv_fn;
  std::function<Matrix(const Vector&)> hess_fn;
  std::optional<double> smoothness_L;
  std::optional<double> strong_convexity_mu;
  std::optional<double> f_star;
  std::optional<int> known_rank;
  std::string name;

  bool has_gradient_route() const {
    return static_cast<bool>(grad_fn) || static_cast<bool>(dderiv_fn);
  }
};

/// Evaluates f(theta). Function values are free in the oracle model, so this
/// never touches any ledger.
double eval(const Objective& obj, const Vector& point);

/// Central difference (f(x+hu) - f(x-hu)) / (2h); O(h^2) for smooth f.
double fd_directional(const Objective& obj, const Vector& point,
                      const Direction& dir, double h);

/// Default finite-difference step: 1e-6 * (1 + |theta|).
inline double default_fd_step(const Vector& point) {
  return 1e-6 * (1.0 + point.norm());
}

/// Uncounted directional derivative: analytic dderiv if present, then
/// analytic gradient, then central finite differences.
double directional_derivative_raw(const Objective& obj, const Vector& point,
                                  const Direction& dir);

/// Uncounted full gradient through the best available route.
Vector full_gradient_raw(const Objective& obj, const Vector& point);

/// Checks grad_fn against dderiv_fn and/or finite differences at `n` random
/// points. Returns the worst relative error seen.
double gradient_consistency_error(const Objective& obj, int n,
                                  std::uint64_t seed);

} // namespace lrgd

#endif
