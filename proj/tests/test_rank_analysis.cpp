#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lrgd/functions.hpp"
#include "lrgd/rank_analysis.hpp"

using namespace lrgd;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

std::vector<Vector> gaussian_points(int n, int p, std::uint64_t seed,
                                    double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Vector> pts;
  for (int k = 0; k < n; ++k) {
    Vector v(p);
    for (int i = 0; i < p; ++i) v[i] = scale * gauss(rng);
    pts.push_back(v);
  }
  return pts;
}

Matrix diag_matrix(std::initializer_list<double> vals) {
  Vector d = vec(vals);
  return Matrix(d.asDiagonal());
}

} // namespace

TEST_CASE("estimate_rank") {
  SUBCASE("rank-1 ridge has a one-point spectrum") {
    Matrix A(1, 5);
    A << 1, 0.3, 0, 0, 0;
    const Objective f = make_ridge(A, squares_profile());
    const auto est = estimate_rank(f, gaussian_points(20, 5, 3), 1e-8);
    CHECK(est.rank == 1);
    CHECK(est.spectrum[1] / est.spectrum[0] <= 1e-8);
  }
  SUBCASE("full-rank quadratic in R^3") {
    const Objective q = make_quadratic(diag_matrix({3, 2, 1}));
    const auto est = estimate_rank(q, gaussian_points(20, 3, 5), 1e-10);
    CHECK(est.rank == 3);
  }
  SUBCASE("zero gradients raise degenerate sample") {
    Objective c;
    c.dim = 2;
    c.value_fn = [](const Vector&) { return 1.0; };
    c.grad_fn = [](const Vector& t) { return Vector(Vector::Zero(t.size())); };
    CHECK_THROWS_AS(estimate_rank(c, gaussian_points(5, 2, 7), 1e-8),
                    DegenerateSampleError);
  }
  SUBCASE("scaling invariance") {
    Matrix A(2, 6);
    A << 1, 0, 0.5, 0, 0, 0, 0, 1, 0, 0.5, 0, 0;
    const Objective f = make_ridge(A, squares_profile());
    const auto pts = gaussian_points(25, 6, 11);
    const int base = estimate_rank(f, pts, 1e-8).rank;
    for (double alpha : {0.5, 2.0, 100.0}) {
      const Objective s = scale_objective(alpha, f);
      CHECK(estimate_rank(s, pts, 1e-8).rank == base);
    }
  }
}

TEST_CASE("verify_approx_rank") {
  Matrix A(2, 6);
  A << 1, 0, 0, 0.5, 0, 0, 0, 1, 0.5, 0, 0, 0;
  const Objective f = make_ridge(A, squares_profile());
  const Subspace H = ridge_subspace(A);
  const Region ball = Region::ball(Vector::Zero(6), 3.0);

  SUBCASE("exact ridge with its true subspace always passes") {
    const auto cert = verify_approx_rank(f, H, ball, 0.1, 0.05, 400, 13);
    CHECK(cert.passed);
    // residuals vanish, so the slack is exactly -eps
    CHECK(cert.worst_residual_slack == doctest::Approx(-0.05).epsilon(1e-9));
    CHECK(cert.n_samples == 400);
  }
  SUBCASE("orthogonal subspace fails at any point with a sizable gradient") {
    std::vector<Vector> comp;
    comp.push_back(vec({0, 0, 1, 0, 0, 0}));
    const Subspace wrong = orthonormalize(comp, 1e-12);
    const auto cert = verify_approx_rank(f, wrong, ball, 0.0, 1e-4, 400, 17);
    CHECK_FALSE(cert.passed);
    CHECK(cert.worst_residual_slack > 0.0);
  }
  SUBCASE("monotonicity in (eta, eps) on identical samples") {
    const ApproxLowRank alr =
        make_approx_low_rank(A, squares_profile(), 0.03, 0.02, 19, 3.0);
    const auto base = verify_approx_rank(alr.objective, alr.subspace, ball,
                                         0.03, 0.02, 300, 23);
    CHECK(base.passed);
    for (double eta2 : {0.03, 0.06}) {
      for (double eps2 : {0.02, 0.08}) {
        const auto cert2 = verify_approx_rank(alr.objective, alr.subspace,
                                              ball, eta2, eps2, 300, 23);
        CHECK(cert2.passed);
        CHECK(cert2.worst_residual_slack <= base.worst_residual_slack + 1e-12);
      }
    }
  }
  SUBCASE("explicit sample lists are honored verbatim") {
    const Region pts = Region::samples({vec({1, 0, 0, 0, 0, 0}),
                                        vec({0, 1, 0, 0, 0, 0})});
    const auto cert = verify_approx_rank(f, H, pts, 0.0, 1e-6, 99, 29);
    CHECK(cert.n_samples == 2);
    CHECK(cert.passed);
  }
  SUBCASE("strongly convex quadratic cannot certify with tiny eps") {
    const Objective q = make_quadratic(Matrix::Identity(2, 2)); // mu = 2
    std::vector<Vector> one;
    one.push_back(vec({1, 0}));
    const Subspace line = orthonormalize(one, 1e-12);
    const auto cert = verify_approx_rank(
        q, line, Region::ball(Vector::Zero(2), 1.0), 0.5, 1e-12, 2000, 31);
    CHECK_FALSE(cert.passed);
  }
}

TEST_CASE("certificate text record") {
  Matrix A(1, 3);
  A << 1, 0, 0;
  const Objective f = make_ridge(A, squares_profile());
  const auto cert =
      verify_approx_rank(f, ridge_subspace(A),
                         Region::ball(Vector::Zero(3), 2.0), 0.1, 0.01, 50, 37);
  const std::string text = certificate_to_text(cert);
  CHECK(text.find("rank: 1") != std::string::npos);
  CHECK(text.find("passed: true") != std::string::npos);
  CHECK(text.find("region: ball") != std::string::npos);
  CHECK(text.find("seed: 37") != std::string::npos);
  CHECK(text.find("subspace_basis:") != std::string::npos);
}

TEST_CASE("hessian_estimate") {
  SUBCASE("quadratic uses the exact analytic Hessian") {
    const Objective q = make_quadratic(diag_matrix({3, 1}));
    const Matrix h = hessian_estimate(q, vec({0.7, -0.4}));
    CHECK(h(0, 0) == doctest::Approx(6.0));
    CHECK(h(1, 1) == doctest::Approx(2.0));
    CHECK(h(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("linear function has a zero Hessian") {
    Matrix A(1, 3);
    A << 1, 2, -1;
    const Objective f = make_ridge(A, linear_profile());
    const Matrix h = hessian_estimate(f, vec({0.3, 0.1, 2.0}));
    CHECK(h.cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("finite differences recover a hand-computed Hessian") {
    Objective f;
    f.dim = 2;
    f.value_fn = [](const Vector& t) { return t[0] * t[0] * t[1]; };
    f.grad_fn = [](const Vector& t) {
      return Vector(vec({2 * t[0] * t[1], t[0] * t[0]}));
    };
    const Matrix h = hessian_estimate(f, vec({1, 1}));
    CHECK(h(0, 0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(h(0, 1) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(h(1, 0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(h(1, 1) == doctest::Approx(0.0).epsilon(1e-5));
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("value-only objectives are rejected") {
    Objective f;
    f.dim = 1;
    f.value_fn = [](const Vector& t) { return t[0]; };
    CHECK_THROWS_AS(hessian_estimate(f, Vector::Zero(1)),
                    OracleUnavailableError);
  }
}

TEST_CASE("local_hessian_subspace") {
  SUBCASE("gradient direction comes first") {
    const Objective q = make_quadratic(diag_matrix({3, 1}));
    const LocalSubspace ls = local_hessian_subspace(q, vec({1, 0}), 1);
    CHECK(ls.subspace.rank() == 1);
    CHECK((ls.subspace.basis_vector(0) - vec({1, 0})).norm() < 1e-12);
    CHECK(ls.hessian_sigma_r == doctest::Approx(6.0));
    CHECK_FALSE(ls.gradient_degenerate);
  }
  SUBCASE("r = p spans the whole space") {
    const Objective q = make_quadratic(diag_matrix({3, 1}));
    const LocalSubspace ls = local_hessian_subspace(q, vec({1, 1}), 2);
    CHECK(ls.subspace.rank() == 2);
    CHECK(ls.hessian_sigma_r == doctest::Approx(2.0));
  }
  SUBCASE("rank-1 ridge has vanishing second singular value") {
    Matrix A(1, 4);
    A << 1, 0.5, 0, 0;
    const Objective f = make_ridge(A, cubic_profile());
    Vector base = Vector::Zero(4);
    base[0] = 1.0;
    const Matrix h = hessian_estimate(f, base);
    Eigen::JacobiSVD<Matrix> svd(h);
    CHECK(svd.singularValues()[1] < 1e-10);
    const LocalSubspace ls = local_hessian_subspace(f, base, 1);
    // residuals off span(A^T) vanish for an exact ridge
    CHECK(principal_angle_gap(ls.subspace, ridge_subspace(A)) < 1e-10);
  }
  SUBCASE("zero gradient flags the degenerate branch") {
    const Objective q = make_quadratic(diag_matrix({3, 1}));
    const LocalSubspace ls = local_hessian_subspace(q, Vector::Zero(2), 1);
    CHECK(ls.gradient_degenerate);
    CHECK(ls.subspace.rank() == 1);
    CHECK((ls.subspace.basis_vector(0) - vec({1, 0})).norm() < 1e-12);
  }
}

TEST_CASE("check_local_bound") {
  SUBCASE("quadratics fit M = 0") {
    const Objective q = make_quadratic(diag_matrix({3, 1}));
    const LocalSubspace ls = local_hessian_subspace(q, vec({1, 0.5}), 1);
    const LocalBoundFit fit = check_local_bound(
        q, vec({1, 0.5}), ls.subspace, ls.hessian_sigma_r, 0.5, 400, 41);
    CHECK(fit.fitted_M <= 1e-8);
    CHECK(fit.max_violation <= 1e-12);
  }
  SUBCASE("cubic coupling yields a positive fitted M bounded by theory") {
    // f = theta_0 + theta_1^3: the gradient Taylor error is exactly
    // (0, 3 d^2) and the local Hessian vanishes, so rho / d^2 <= 3.
    Objective f;
    f.dim = 2;
    f.value_fn = [](const Vector& t) {
      return t[0] + t[1] * t[1] * t[1];
    };
    f.grad_fn = [](const Vector& t) {
      return Vector(vec({1.0, 3.0 * t[1] * t[1]}));
    };
    f.hess_fn = [](const Vector& t) {
      Matrix h = Matrix::Zero(2, 2);
      h(1, 1) = 6.0 * t[1];
      return h;
    };
    const Vector base = Vector::Zero(2);
    const LocalSubspace ls = local_hessian_subspace(f, base, 1);
    CHECK(ls.hessian_sigma_r == doctest::Approx(0.0));
    const LocalBoundFit fit = check_local_bound(
        f, base, ls.subspace, ls.hessian_sigma_r, 0.01, 4096, 43);
    CHECK(fit.fitted_M > 0.0);
    CHECK(fit.fitted_M <= 3.0 + 1e-9);
    CHECK(fit.max_violation <= 1e-12);
    // held-out validation at the analytic constant M = 3 never violates
    CHECK(local_bound_violation(f, base, ls.subspace, ls.hessian_sigma_r,
                                3.0, 0.01, 500, 47) <= 1e-12);
    // and at the fitted constant stays within the acceptance tolerance
    CHECK(local_bound_violation(f, base, ls.subspace, ls.hessian_sigma_r,
                                fit.fitted_M, 0.01, 500, 47) <= 1e-8);
  }
  SUBCASE("shrinking radius keeps the fit stable") {
    const Objective q = make_quadratic(diag_matrix({3, 1}));
    const LocalSubspace ls = local_hessian_subspace(q, vec({1, 0.5}), 1);
    for (double radius : {0.5, 0.05,}) {
      const LocalBoundFit fit = check_local_bound(
          q, vec({1, 0.5}), ls.subspace, ls.hessian_sigma_r, radius, 200, 53);
      CHECK(fit.fitted_M <= 1e-8);
    }
  }
}

TEST_CASE("passing certificates on a strongly convex ball respect the "
          "mu-delta tradeoff") {
  // mu = 2 quadratic on the unit ball: certificates with dimension 1 < p
  // can only pass when eps >= mu * delta * (1 - eta) up to sampling slack.
  const Objective q = make_quadratic(Matrix::Identity(2, 2));
  std::vector<Vector> one;
  one.push_back(vec({1, 0}));
  const Subspace line = orthonormalize(one, 1e-12);
  const Region ball = Region::ball(Vector::Zero(2), 1.0);
  const double mu = 2.0, delta = 1.0;
  for (int ei = 0; ei < 8; ++ei) {
    for (int vi = 0; vi < 8; ++vi) {
      const double eta = ei / 8.0;
      const double eps = 0.25 + 2.0 * vi / 8.0;
      const auto cert = verify_approx_rank(q, line, ball, eta, eps, 4000, 59);
      if (cert.passed) CHECK(eps >= mu * delta * (1.0 - eta) - 0.05);
    }
  }
}
