#ifndef LRGD_FUNCTIONS_HPP
#define LRGD_FUNCTIONS_HPP

#include <memory>
#include <utility>

#include "lrgd/objective.hpp"
#include "lrgd/subspace.hpp"

namespace lrgd {

/// One-dimensional-in / scalar-out profile sigma: R^r -> R for ridge
/// functions, with analytic gradient and optional Hessian / smoothness data.
struct Profile {
  std::string id;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
  std::function<Matrix(const Vector&)> hess; // optional
  std::optional<double> L;                   // smoothness of sigma
  std::optional<double> mu;                  // strong convexity of sigma
  std::optional<double> min_value;           // min of sigma when known
};

/// sigma(x) = sum x_i^2 (L = 2, mu = 2, min 0).
Profile squares_profile();
/// sigma(x) = 1/2 sum d_i x_i^2 (L = max d, mu = min d, min 0).
Profile quadratic_profile(const Vector& diag);
/// sigma(x) = sum (x_i^2 + a sin^2 x_i); non-convex for a > 1, L = 2 + 2a.
Profile nonconvex_profile(double a = 2.0);
/// sigma(x) = sum x_i^3 (bounded, constant third derivative).
Profile cubic_profile();
/// sigma(x) = sum sin x_i.
Profile sine_profile();
/// sigma(x) = sum x_i.
Profile linear_profile();

/// f(theta) = theta^T H theta for symmetric PSD H.
/// L = 2 lambda_max(H), mu = 2 lambda_min(H) (when positive), f* = 0,
/// known_rank = rank(H).
Objective make_quadratic(const Matrix& H);

/// f(theta) = sigma(A theta) for a full-row-rank r x p matrix A.
/// known_rank = r; the gradient A^T grad-sigma(A theta) stays in span(A^T).
/// When r < p, mu metadata describes the restriction to span(A^T), not f.
Objective make_ridge(const Matrix& A, const Profile& profile);

/// The certified active subspace span(A^T) of a ridge.
Subspace ridge_subspace(const Matrix& A);

/// Algebra of objectives; rank bounds follow the calculus of gradient spans
/// (scale: r1, sum/product: r1 + r2, compose: r1).
struct CompositeSpec {
  enum class Op { Scale, Sum, Product, Compose };
  Op op;
  double scale = 1.0; // Scale only; must be nonzero
  std::shared_ptr<const Objective> first;
  std::shared_ptr<const Objective> second;             // Sum / Product
  std::function<double(double)> outer;                 // Compose: g
  std::function<double(double)> outer_derivative;      // Compose: g'
  std::string outer_id;                                // e.g. "exp"
};

Objective combine(const CompositeSpec& spec);

// Convenience wrappers.
Objective scale_objective(double alpha, Objective inner);
Objective sum_objectives(Objective a, Objective b);
Objective product_objectives(Objective a, Objective b);
Objective compose_objective(std::function<double(double)> g,
                            std::function<double(double)> dg,
                            std::string g_id, Objective inner);

/// The coordinate-product function f(theta) = prod theta_i on the positive
/// orthant (rank p) together with its log transform g(phi) = <1, phi>
/// (rank 1). Minimizing one maps to minimizing the other under phi = log
/// theta coordinate-wise.
std::pair<Objective, Objective> make_geometric_product(int p);

/// A certified member of the (eta, eps)-approximately rank-r class: a ridge
/// whose matrix is tilted out of span(A^T) (multiplicative error) plus a
/// gradient-capped sine potential in the orthogonal coordinates (additive
/// error). Construction self-checks the certificate on sampled points.
struct ApproxLowRank {
  Objective objective;
  Subspace subspace; // the certified subspace H = span(A^T)
  double eta = 0.0;
  double eps_tilde = 0.0;
  int rank = 0;
  double region_radius = 0.0; // certificate holds on B(0, region_radius)
};

ApproxLowRank make_approx_low_rank(const Matrix& A, const Profile& profile,
                                   double eta, double eps_tilde,
                                   std::uint64_t seed,
                                   double region_radius = 10.0);

} // namespace lrgd

#endif
