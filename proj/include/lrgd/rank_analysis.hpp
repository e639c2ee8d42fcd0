#ifndef LRGD_RANK_ANALYSIS_HPP
#define LRGD_RANK_ANALYSIS_HPP

#include <string>
#include <vector>

#include "lrgd/objective.hpp"
#include "lrgd/subspace.hpp"

namespace lrgd {

/// Where an approximate-rank certificate was checked: a ball around a center
/// or an explicit list of points.
class Region {
public:
  static Region ball(Vector center, double radius);
  static Region samples(std::vector<Vector> points);

  bool is_ball() const { return is_ball_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<Vector>& points() const { return points_; }

  /// Draws n points (uniform in the ball, or the stored list).
  std::vector<Vector> draw(int n, std::uint64_t seed) const;

private:
  Region() = default;
  bool is_ball_ = false;
  Vector center_;
  double radius_ = 0.0;
  std::vector<Vector> points_;
};

struct RankEstimate {
  int rank = 0;
  Vector spectrum; // all singular values of the normalized gradient matrix
};

/// Smallest r whose leading singular values capture a (1 - energy_tol)
/// fraction of the squared-singular-value mass of the normalized sampled
/// gradient matrix.
RankEstimate estimate_rank(const Objective& obj,
                           const std::vector<Vector>& samples,
                           double energy_tol);

struct ApproxRankCertificate {
  int r = 0;
  double eta = 0.0;
  double eps = 0.0;
  Subspace subspace;
  Region region;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double worst_residual_slack = 0.0; // max ||g - Pg|| - (eta ||g|| + eps)
  bool passed = false;               // <=> worst_residual_slack <= 0
};

/// Checks || grad f - P_S grad f || <= eta || grad f || + eps on sampled
/// points of the region. Failure is a certificate with passed = false.
ApproxRankCertificate verify_approx_rank(const Objective& obj,
                                         const Subspace& S,
                                         const Region& region, double eta,
                                         double eps, int n_samples,
                                         std::uint64_t seed);

/// Renders a certificate as a flat key: value text record.
std::string certificate_to_text(const ApproxRankCertificate& cert);

/// Hessian at theta_bar: analytic when available, otherwise symmetrized
/// central differences of the gradient with h = 1e-4 * (1 + |theta_bar|).
Matrix hessian_estimate(const Objective& obj, const Vector& theta_bar);

struct LocalSubspace {
  Subspace subspace;
  double hessian_sigma_r = 0.0;   // r-th singular value of the Hessian
  bool gradient_degenerate = false; // grad(theta_bar) was numerically zero
};

/// Span of the gradient at theta_bar together with the top r-1 singular
/// vectors of the local Hessian (the residual bound then carries the
/// Hessian's r-th singular value).
LocalSubspace local_hessian_subspace(const Objective& obj,
                                     const Vector& theta_bar, int r);

struct LocalBoundFit {
  double fitted_M = 0.0;
  double max_violation = 0.0; // at fitted_M over the fitting sample (<= 0)
};

/// Fits the smallest M >= 0 with
///   || grad f - P_S grad f || - sigma_r ||theta - theta_bar||
///     <= M ||theta - theta_bar||^2
/// over points sampled in B(theta_bar, radius).
LocalBoundFit check_local_bound(const Objective& obj, const Vector& theta_bar,
                                const Subspace& S, double sigma_r,
                                double radius, int n_samples,
                                std::uint64_t seed);

/// Max violation of the bound at a given M on a fresh sample (held-out
/// validation of a fitted M).
double local_bound_violation(const Objective& obj, const Vector& theta_bar,
                             const Subspace& S, double sigma_r, double M,
                             double radius, int n_samples, std::uint64_t seed);

} // namespace lrgd

#endif
