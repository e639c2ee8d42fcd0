#include "lrgd/rank_analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace lrgd {

Region Region::ball(Vector center, double radius) {
  if (!(radius > 0)) throw Error("Region::ball: radius must be positive");
  Region r;
  r.is_ball_ = true;
  r.center_ = std::move(center);
  r.radius_ = radius;
  return r;
}

Region Region::samples(std::vector<Vector> points) {
  if (points.empty()) throw Error("Region::samples: empty point list");
  Region r;
  r.points_ = std::move(points);
  return r;
}

std::vector<Vector> Region::draw(int n, std::uint64_t seed) const {
  if (!is_ball_) return points_;
  const auto p = center_.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Vector dir(p);
    for (Eigen::Index i = 0; i < p; ++i) dir[i] = gauss(rng);
    dir.normalize();
    const double rad =
        radius_ * std::pow(unif(rng), 1.0 / static_cast<double>(p));
    out.push_back(center_ + rad * dir);
  }
  return out;
}

RankEstimate estimate_rank(const Objective& obj,
                           const std::vector<Vector>& samples,
                           double energy_tol) {
  std::vector<Vector> gradients;
  gradients.reserve(samples.size());
  for (const auto& point : samples) {
    Vector g = full_gradient_raw(obj, point);
    if (g.norm() > 0.0) gradients.push_back(std::move(g));
  }
  if (gradients.empty())
    throw DegenerateSampleError("degenerate sample: all gradients zero");
  const GradientMatrix G = GradientMatrix::from_gradients(gradients);
  const Vector& sigma = G.singular_values();
  const double total = sigma.squaredNorm();
  double cum = 0.0;
  int rank = static_cast<int>(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    cum += sigma[i] * sigma[i];
    if (cum >= (1.0 - energy_tol) * total) {
      rank = static_cast<int>(i) + 1;
      break;
    }
  }
  return RankEstimate{rank, sigma};
}

ApproxRankCertificate verify_approx_rank(const Objective& obj,
                                         const Subspace& S,
                                         const Region& region, double eta,
                                         double eps, int n_samples,
                                         std::uint64_t seed) {
  if (eta < 0.0 || eta >= 1.0)
    throw Error("verify_approx_rank: eta must be in [0, 1)");
  if (!(eps > 0.0)) throw Error("verify_approx_rank: eps must be positive");
  const std::vector<Vector> points = region.draw(n_samples, seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& point : points) {
    const Vector g = full_gradient_raw(obj, point);
    const double resid = (g - S.project(g)).norm();
    worst = std::max(worst, resid - (eta * g.norm() + eps));
  }
  ApproxRankCertificate cert{static_cast<int>(S.rank()),
                             eta,
                             eps,
                             S,
                             region,
                             static_cast<int>(points.size()),
                             seed,
                             worst,
                             worst <= 0.0};
  return cert;
}

std::string certificate_to_text(const ApproxRankCertificate& cert) {
  std::ostringstream out;
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "rank: " << cert.r << "\n";
  out << "eta: " << num(cert.eta) << "\n";
  out << "eps: " << num(cert.eps) << "\n";
  out << "n_samples: " << cert.n_samples << "\n";
  out << "seed: " << cert.seed << "\n";
  out << "worst_residual_slack: " << num(cert.worst_residual_slack) << "\n";
  out << "passed: " << (cert.passed ? "true" : "false") << "\n";
  if (cert.region.is_ball()) {
    out << "region: ball\n";
    out << "region_radius: " << num(cert.region.radius()) << "\n";
    out << "region_center:";
    for (Eigen::Index i = 0; i < cert.region.center().size(); ++i)
      out << " " << num(cert.region.center()[i]);
    out << "\n";
  } else {
    out << "region: samples\n";
    out << "region_points: " << cert.region.points().size() << "\n";
  }
  out << "subspace_basis:\n";
  const Matrix& basis = cert.subspace.basis();
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    out << " ";
    for (Eigen::Index i = 0; i < basis.rows(); ++i)
      out << " " << num(basis(i, j));
    out << "\n";
  }
  return out.str();
}

Matrix hessian_estimate(const Objective& obj, const Vector& theta_bar) {
  if (obj.hess_fn) {
    const Matrix h = obj.hess_fn(theta_bar);
    return Matrix(0.5 * (h + h.transpose()));
  }
  if (!obj.has_gradient_route())
    throw OracleUnavailableError(
        "hessian_estimate: objective has no gradient route");
  const int p = obj.dim;
  const double h = 1e-4 * (1.0 + theta_bar.norm());
  Matrix out(p, p);
  for (int j = 0; j < p; ++j) {
    Vector shift = Vector::Zero(p);
    shift[j] = h;
    const Vector gp = full_gradient_raw(obj, theta_bar + shift);
    const Vector gm = full_gradient_raw(obj, theta_bar - shift);
    out.col(j) = (gp - gm) / (2.0 * h);
  }
  if (!out.allFinite())
    throw Error("hessian_estimate: non-finite finite-difference entries");
  return Matrix(0.5 * (out + out.transpose()));
}

LocalSubspace local_hessian_subspace(const Objective& obj,
                                     const Vector& theta_bar, int r) {
  const int p = obj.dim;
  if (r < 1 || r > p) throw Error("local_hessian_subspace: need 1 <= r <= p");
  const Matrix hess = hessian_estimate(obj, theta_bar);
  Eigen::JacobiSVD<Matrix> svd(hess, Eigen::ComputeFullU);
  const Vector& sigma = svd.singularValues();
  const Vector grad = full_gradient_raw(obj, theta_bar);
  const double grad_tol = 1e-12 * (1.0 + sigma[0]);

  std::vector<Vector> vectors;
  bool degenerate = false;
  if (grad.norm() > grad_tol) {
    vectors.push_back(grad);
    for (int i = 0; i + 1 < r; ++i) vectors.push_back(svd.matrixU().col(i));
  } else {
    degenerate = true;
    for (int i = 0; i < r; ++i) vectors.push_back(svd.matrixU().col(i));
  }
  Subspace S = orthonormalize(vectors, 1e-10);
  return LocalSubspace{std::move(S), sigma[r - 1], degenerate};
}

namespace {

double bound_residual(const Objective& obj, const Vector& theta_bar,
                      const Subspace& S, double sigma_r, const Vector& point) {
  const Vector g = full_gradient_raw(obj, point);
  return (g - S.project(g)).norm() - sigma_r * (point - theta_bar).norm();
}

} // namespace

LocalBoundFit check_local_bound(const Objective& obj, const Vector& theta_bar,
                                const Subspace& S, double sigma_r,
                                double radius, int n_samples,
                                std::uint64_t seed) {
  if (!(radius > 0)) throw Error("check_local_bound: radius must be positive");
  const Region region = Region::ball(theta_bar, radius);
  const auto points = region.draw(n_samples, seed);
  double fitted = 0.0;
  for (const auto& point : points) {
    const double d2 = (point - theta_bar).squaredNorm();
    if (d2 == 0.0) continue;
    const double rho = bound_residual(obj, theta_bar, S, sigma_r, point);
    fitted = std::max(fitted, rho / d2);
  }
  double violation = -std::numeric_limits<double>::infinity();
  for (const auto& point : points) {
    const double rho = bound_residual(obj, theta_bar, S, sigma_r, point);
    violation =
        std::max(violation, rho - fitted * (point - theta_bar).squaredNorm());
  }
  return LocalBoundFit{fitted, violation};
}

double local_bound_violation(const Objective& obj, const Vector& theta_bar,
                             const Subspace& S, double sigma_r, double M,
                             double radius, int n_samples,
                             std::uint64_t seed) {
  const Region region = Region::ball(theta_bar, radius);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& point : region.draw(n_samples, seed)) {
    const double rho = bound_residual(obj, theta_bar, S, sigma_r, point);
    worst = std::max(worst, rho - M * (point - theta_bar).squaredNorm());
  }
  return worst;
}

} // namespace lrgd
