#include "lrgd/oracle.hpp"

#include <cmath>
#include <random>

namespace lrgd {

double eval(const Objective& obj, const Vector& point) {
  if (point.size() != obj.dim)
    throw Error("eval: dimension mismatch");
  const double v = obj.value_fn(point);
  if (!std::isfinite(v))
    throw ObjectiveOverflowError("objective overflow", point);
  return v;
}

double fd_directional(const Objective& obj, const Vector& point,
                      const Direction& dir, double h) {
  if (!(h > 0.0)) throw Error("fd_directional: h must be positive");
  const double fp = obj.value_fn(point + h * dir.coords());
  const double fm = obj.value_fn(point - h * dir.coords());
  if (!std::isfinite(fp) || !std::isfinite(fm))
    throw OracleUnavailableError("oracle unavailable: non-finite stencil");
  return (fp - fm) / (2.0 * h);
}

double directional_derivative_raw(const Objective& obj, const Vector& point,
                                  const Direction& dir) {
  if (point.size() != obj.dim || dir.dim() != obj.dim)
    throw Error("directional_derivative: dimension mismatch");
  if (obj.dderiv_fn) return obj.dderiv_fn(point, dir);
  if (obj.grad_fn) return obj.grad_fn(point).dot(dir.coords());
  return fd_directional(obj, point, dir, default_fd_step(point));
}

Vector full_gradient_raw(const Objective& obj, const Vector& point) {
  if (point.size() != obj.dim)
    throw Error("full_gradient: dimension mismatch");
  if (obj.grad_fn) {
    Vector g = obj.grad_fn(point);
    if (!all_finite(g))
      throw OracleUnavailableError("oracle unavailable: non-finite gradient");
    return g;
  }
  Vector g(obj.dim);
  for (int i = 0; i < obj.dim; ++i)
    g[i] = directional_derivative_raw(obj, point, Direction::axis(obj.dim, i));
  return g;
}

double CountedObjective::directional_derivative(const Vector& point,
                                                const Direction& dir,
                                                CallCategory cat) {
  const double v = directional_derivative_raw(*obj_, point, dir);
  ledger_.charge(cat, 1);
  return v;
}

double CountedObjective::directional_derivative(const Vector& point,
                                                const Direction& dir) {
  return directional_derivative(point, dir, category_);
}

Vector CountedObjective::full_gradient(const Vector& point, CallCategory cat) {
  Vector g = full_gradient_raw(*obj_, point);
  ledger_.charge(cat, obj_->dim);
  return g;
}

Vector CountedObjective::full_gradient(const Vector& point) {
  return full_gradient(point, category_);
}

double gradient_consistency_error(const Objective& obj, int n,
                                  std::uint64_t seed) {
  if (!obj.grad_fn) throw Error("gradient_consistency_error: no grad_fn");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    Vector point(obj.dim), raw(obj.dim);
    for (int i = 0; i < obj.dim; ++i) point[i] = 0.5 * gauss(rng);
    for (int i = 0; i < obj.dim; ++i) raw[i] = gauss(rng);
    if (raw.norm() == 0.0) continue;
    const Direction dir = Direction::normalized(raw);
    const double exact = obj.grad_fn(point).dot(dir.coords());
    double approx;
    if (obj.dderiv_fn) {
      approx = obj.dderiv_fn(point, dir);
    } else {
      approx = fd_directional(obj, point, dir, 1e-5);
    }
    const double err = std::abs(approx - exact) / (1.0 + std::abs(exact));
    worst = std::max(worst, err);
  }
  return worst;
}

} // namespace lrgd
