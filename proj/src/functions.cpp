#include "lrgd/functions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <random>

namespace lrgd {

Profile squares_profile() {
  Profile prof;
  prof.id = "squares";
  prof.value = [](const Vector& x) { return x.squaredNorm(); };
  prof.grad = [](const Vector& x) { return Vector(2.0 * x); };
  prof.hess = [](const Vector& x) {
    return Matrix(2.0 * Matrix::Identity(x.size(), x.size()));
  };
  prof.L = 2.0;
  prof.mu = 2.0;
  prof.min_value = 0.0;
  return prof;
}

Profile quadratic_profile(const Vector& diag) {
  if (diag.minCoeff() <= 0)
    throw Error("quadratic_profile: diagonal must be positive");
  Profile prof;
  prof.id = "quadratic";
  Vector d = diag;
  prof.value = [d](const Vector& x) {
    return 0.5 * x.cwiseProduct(d.cwiseProduct(x)).sum();
  };
  prof.grad = [d](const Vector& x) { return Vector(d.cwiseProduct(x)); };
  prof.hess = [d](const Vector&) { return Matrix(d.asDiagonal()); };
  prof.L = d.maxCoeff();
  prof.mu = d.minCoeff();
  prof.min_value = 0.0;
  return prof;
}

Profile nonconvex_profile(double a) {
  Profile prof;
  prof.id = "nonconvex";
  prof.value = [a](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double si = std::sin(x[i]);
      s += x[i] * x[i] + a * si * si;
    }
    return s;
  };
  prof.grad = [a](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      g[i] = 2.0 * x[i] + a * std::sin(2.0 * x[i]);
    return g;
  };
  prof.hess = [a](const Vector& x) {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      h(i, i) = 2.0 + 2.0 * a * std::cos(2.0 * x[i]);
    return h;
  };
  prof.L = 2.0 + 2.0 * a;
  prof.min_value = 0.0; // each term is >= 0 with equality at 0
  return prof;
}

Profile cubic_profile() {
  Profile prof;
  prof.id = "cubic";
  prof.value = [](const Vector& x) { return x.array().cube().sum(); };
  prof.grad = [](const Vector& x) {
    return Vector(3.0 * x.array().square().matrix());
  };
  prof.hess = [](const Vector& x) {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) h(i, i) = 6.0 * x[i];
    return h;
  };
  return prof;
}

Profile sine_profile() {
  Profile prof;
  prof.id = "sine";
  prof.value = [](const Vector& x) { return x.array().sin().sum(); };
  prof.grad = [](const Vector& x) {
    return Vector(x.array().cos().matrix());
  };
  prof.hess = [](const Vector& x) {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) h(i, i) = -std::sin(x[i]);
    return h;
  };
  prof.L = 1.0;
  return prof;
}

Profile linear_profile() {
  Profile prof;
  prof.id = "linear";
  prof.value = [](const Vector& x) { return x.sum(); };
  prof.grad = [](const Vector& x) { return Vector(Vector::Ones(x.size())); };
  prof.hess = [](const Vector& x) {
    return Matrix(Matrix::Zero(x.size(), x.size()));
  };
  prof.L = 0.0;
  return prof;
}

Objective make_quadratic(const Matrix& H) {
  if (H.rows() != H.cols()) throw Error("make_quadratic: H must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error("make_quadratic: H must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  const Vector& lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-12 * scale)
    throw Error("make_quadratic: H must be positive semi-definite");

  Objective obj;
  obj.dim = static_cast<int>(H.rows());
  obj.name = "quadratic";
  Matrix Hc = H;
  obj.value_fn = [Hc](const Vector& t) { return t.dot(Hc * t); };
  obj.grad_fn = [Hc](const Vector& t) { return Vector(2.0 * Hc * t); };
  obj.hess_fn = [Hc](const Vector&) { return Matrix(2.0 * Hc); };
  obj.smoothness_L = 2.0 * lambda.maxCoeff();
  if (lambda.minCoeff() > 1e-12 * scale)
    obj.strong_convexity_mu = 2.0 * lambda.minCoeff();
  obj.f_star = 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] > 1e-12 * std::max(scale, lambda.maxCoeff())) ++rank;
  obj.known_rank = rank;
  return obj;
}

namespace {

// sigma_min / sigma_max of A; used for the full-row-rank check.
std::pair<double, double> row_spectrum(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  const Vector& s = svd.singularValues();
  return {s[s.size() - 1], s[0]};
}

} // namespace

Subspace ridge_subspace(const Matrix& A) {
  std::vector<Vector> rows;
  rows.reserve(static_cast<std::size_t>(A.rows()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    rows.push_back(A.row(i).transpose());
  return orthonormalize(rows, default_drop_tol(rows));
}

Objective make_ridge(const Matrix& A, const Profile& profile) {
  const auto [smin, smax] = row_spectrum(A);
  if (A.rows() > A.cols() || smin <= 1e-10 * std::max(1.0, smax))
    throw Error("make_ridge: A must have full row rank");

  Objective obj;
  obj.dim = static_cast<int>(A.cols());
  obj.name = "ridge-" + profile.id;
  Matrix Ac = A;
  Profile prof = profile;
  obj.value_fn = [Ac, prof](const Vector& t) { return prof.value(Ac * t); };
  obj.grad_fn = [Ac, prof](const Vector& t) {
    return Vector(Ac.transpose() * prof.grad(Ac * t));
  };
  if (prof.hess)
    obj.hess_fn = [Ac, prof](const Vector& t) {
      return Matrix(Ac.transpose() * prof.hess(Ac * t) * Ac);
    };
  obj.known_rank = static_cast<int>(A.rows());
  if (prof.L) obj.smoothness_L = *prof.L * smax * smax;
  if (prof.mu && A.rows() == A.cols())
    obj.strong_convexity_mu = *prof.mu * smin * smin;
  obj.f_star = prof.min_value;
  return obj;
}

Objective combine(const CompositeSpec& spec) {
  using Op = CompositeSpec::Op;
  if (!spec.first) throw Error("combine: missing first child");
  const auto a = spec.first;
  Objective obj;
  obj.dim = a->dim;

  switch (spec.op) {
    case Op::Scale: {
      if (spec.scale == 0.0)
        throw Error("combine: rank statement requires alpha != 0");
      const double c = spec.scale;
      obj.name = "scale(" + a->name + ")";
      obj.value_fn = [a, c](const Vector& t) { return c * a->value_fn(t); };
      if (a->grad_fn)
        obj.grad_fn = [a, c](const Vector& t) {
          return Vector(c * a->grad_fn(t));
        };
      if (a->hess_fn)
        obj.hess_fn = [a, c](const Vector& t) {
          return Matrix(c * a->hess_fn(t));
        };
      if (a->smoothness_L) obj.smoothness_L = std::abs(c) * *a->smoothness_L;
      if (c > 0 && a->strong_convexity_mu)
        obj.strong_convexity_mu = c * *a->strong_convexity_mu;
      if (c > 0 && a->f_star) obj.f_star = c * *a->f_star;
      obj.known_rank = a->known_rank;
      return obj;
    }
    case Op::Sum: {
      const auto b = spec.second;
      if (!b) throw Error("combine: sum needs two children");
      if (a->dim != b->dim) throw Error("combine: dimension mismatch");
      obj.name = "sum(" + a->name + "," + b->name + ")";
      obj.value_fn = [a, b](const Vector& t) {
        return a->value_fn(t) + b->value_fn(t);
      };
      if (a->grad_fn && b->grad_fn)
        obj.grad_fn = [a, b](const Vector& t) {
          return Vector(a->grad_fn(t) + b->grad_fn(t));
        };
      if (a->hess_fn && b->hess_fn)
        obj.hess_fn = [a, b](const Vector& t) {
          return Matrix(a->hess_fn(t) + b->hess_fn(t));
        };
      if (a->smoothness_L && b->smoothness_L)
        obj.smoothness_L = *a->smoothness_L + *b->smoothness_L;
      if (a->known_rank && b->known_rank)
        obj.known_rank = std::min(a->dim, *a->known_rank + *b->known_rank);
      return obj;
    }
    case Op::Product: {
      const auto b = spec.second;
      if (!b) throw Error("combine: product needs two children");
      if (a->dim != b->dim) throw Error("combine: dimension mismatch");
      obj.name = "product(" + a->name + "," + b->name + ")";
      obj.value_fn = [a, b](const Vector& t) {
        return a->value_fn(t) * b->value_fn(t);
      };
      if (a->grad_fn && b->grad_fn)
        obj.grad_fn = [a, b](const Vector& t) {
          return Vector(a->value_fn(t) * b->grad_fn(t) +
                        b->value_fn(t) * a->grad_fn(t));
        };
      if (a->known_rank && b->known_rank)
        obj.known_rank = std::min(a->dim, *a->known_rank + *b->known_rank);
      return obj;
    }
    case Op::Compose: {
      if (!spec.outer || !spec.outer_derivative)
        throw Error("combine: compose needs g and g'");
      const auto g = spec.outer;
      const auto dg = spec.outer_derivative;
      obj.name = spec.outer_id + "(" + a->name + ")";
      obj.value_fn = [a, g](const Vector& t) { return g(a->value_fn(t)); };
      if (a->grad_fn)
        obj.grad_fn = [a, g, dg](const Vector& t) {
          return Vector(dg(a->value_fn(t)) * a->grad_fn(t));
        };
      obj.known_rank = a->known_rank;
      return obj;
    }
  }
  throw Error("combine: unknown op");
}

Objective scale_objective(double alpha, Objective inner) {
  CompositeSpec spec;
  spec.op = CompositeSpec::Op::Scale;
  spec.scale = alpha;
  spec.first = std::make_shared<Objective>(std::move(inner));
  return combine(spec);
}

Objective sum_objectives(Objective a, Objective b) {
  CompositeSpec spec;
  spec.op = CompositeSpec::Op::Sum;
  spec.first = std::make_shared<Objective>(std::move(a));
  spec.second = std::make_shared<Objective>(std::move(b));
  return combine(spec);
}

Objective product_objectives(Objective a, Objective b) {
  CompositeSpec spec;
  spec.op = CompositeSpec::Op::Product;
  spec.first = std::make_shared<Objective>(std::move(a));
  spec.second = std::make_shared<Objective>(std::move(b));
  return combine(spec);
}

Objective compose_objective(std::function<double(double)> g,
                            std::function<double(double)> dg,
                            std::string g_id, Objective inner) {
  CompositeSpec spec;
  spec.op = CompositeSpec::Op::Compose;
  spec.outer = std::move(g);
  spec.outer_derivative = std::move(dg);
  spec.outer_id = std::move(g_id);
  spec.first = std::make_shared<Objective>(std::move(inner));
  return combine(spec);
}

std::pair<Objective, Objective> make_geometric_product(int p) {
  if (p < 2) throw Error("make_geometric_product: p >= 2 required");

  Objective f;
  f.dim = p;
  f.name = "coordinate-product";
  f.value_fn = [](const Vector& t) {
    if ((t.array() <= 0.0).any())
      throw DomainError(
          "coordinate-product: defined on the positive orthant only");
    return t.prod();
  };
  f.grad_fn = [](const Vector& t) {
    if ((t.array() <= 0.0).any())
      throw DomainError(
          "coordinate-product: defined on the positive orthant only");
    // partial_j f = prod_{i != j} theta_i
    Vector g(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      double prod = 1.0;
      for (Eigen::Index i = 0; i < t.size(); ++i)
        if (i != j) prod *= t[i];
      g[j] = prod;
    }
    return g;
  };
  f.known_rank = p;

  Objective g;
  g.dim = p;
  g.name = "log-coordinate-product";
  g.value_fn = [](const Vector& x) { return x.sum(); };
  g.grad_fn = [](const Vector& x) { return Vector(Vector::Ones(x.size())); };
  g.hess_fn = [](const Vector& x) {
    return Matrix(Matrix::Zero(x.size(), x.size()));
  };
  g.known_rank = 1;
  g.smoothness_L = 0.0;
  return {std::move(f), std::move(g)};
}

ApproxLowRank make_approx_low_rank(const Matrix& A, const Profile& profile,
                                   double eta, double eps_tilde,
                                   std::uint64_t seed, double region_radius) {
  if (eta < 0.0 || eta >= 1.0)
    throw Error("make_approx_low_rank: eta must be in [0, 1)");
  if (eps_tilde <= 0.0)
    throw Error("make_approx_low_rank: eps_tilde must be positive");
  const int r = static_cast<int>(A.rows());
  const int p = static_cast<int>(A.cols());
  if (r >= p) throw Error("make_approx_low_rank: need r < p");

  const Subspace H = ridge_subspace(A);
  // Orthonormal basis of the complement from a full QR of the basis.
  Eigen::HouseholderQR<Matrix> qr(H.basis());
  const Matrix Q = qr.householderQ();
  const Matrix B = Q.rightCols(p - r); // p x (p - r), spans H-perp

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Multiplicative tilt: rows of E live in H-perp, scaled so that the
  // effective eta stays below 0.8 * eta.
  Matrix Atilde = A;
  if (eta > 0.0) {
    Matrix E(r, p);
    for (int i = 0; i < r; ++i) {
      Vector coeffs(p - r);
      for (int j = 0; j < p - r; ++j) coeffs[j] = gauss(rng);
      Vector row = B * coeffs;
      E.row(i) = row.transpose() / row.norm();
    }
    const auto [amin, amax] = row_spectrum(A);
    (void)amax;
    Eigen::JacobiSVD<Matrix> esvd(E);
    const double enorm = esvd.singularValues()[0];
    const double eta_target = 0.8 * eta;
    const double scale = eta_target * amin / ((1.0 + eta_target) * enorm);
    Atilde += scale * E;
  }

  // Additive potential in the complement coordinates; gradient norm capped
  // at 0.8 * eps_tilde.
  const double cap = 0.8 * eps_tilde;
  Vector coeff(p - r);
  coeff.setConstant(cap / std::sqrt(static_cast<double>(p - r)));
  Vector phase(p - r);
  constexpr double kTwoPi = 6.283185307179586;
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  for (int j = 0; j < p - r; ++j) phase[j] = unif(rng);

  Objective obj;
  obj.dim = p;
  obj.name = "approx-low-rank(" + profile.id + ")";
  Matrix At = Atilde, Bc = B;
  Profile prof = profile;
  Vector cc = coeff, ph = phase;
  obj.value_fn = [At, Bc, prof, cc, ph](const Vector& t) {
    double pert = 0.0;
    const Vector y = Bc.transpose() * t;
    for (Eigen::Index j = 0; j < y.size(); ++j)
      pert += cc[j] * std::sin(y[j] + ph[j]);
    return prof.value(At * t) + pert;
  };
  obj.grad_fn = [At, Bc, prof, cc, ph](const Vector& t) {
    Vector g = At.transpose() * prof.grad(At * t);
    const Vector y = Bc.transpose() * t;
    for (Eigen::Index j = 0; j < y.size(); ++j)
      g += cc[j] * std::cos(y[j] + ph[j]) * Bc.col(j);
    return g;
  };
  if (prof.hess)
    obj.hess_fn = [At, Bc, prof, cc, ph](const Vector& t) {
      Matrix h = At.transpose() * prof.hess(At * t) * At;
      const Vector y = Bc.transpose() * t;
      for (Eigen::Index j = 0; j < y.size(); ++j)
        h -= cc[j] * std::sin(y[j] + ph[j]) * Bc.col(j) *
             Bc.col(j).transpose();
      return h;
    };
  if (prof.L) {
    Eigen::JacobiSVD<Matrix> asvd(Atilde);
    const double amax = asvd.singularValues()[0];
    obj.smoothness_L = *prof.L * amax * amax + coeff.maxCoeff();
  }

  // Self-check the certificate on sampled points in the region.
  {
    std::mt19937_64 check_rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> g01(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 256; ++k) {
      Vector dirv(p);
      for (int i = 0; i < p; ++i) dirv[i] = g01(check_rng);
      dirv.normalize();
      const double rad =
          region_radius * std::pow(u01(check_rng), 1.0 / p);
      const Vector point = rad * dirv;
      const Vector grad = obj.grad_fn(point);
      const double resid = (grad - H.project(grad)).norm();
      if (resid > eta * grad.norm() + eps_tilde)
        throw Error("make_approx_low_rank: certificate cap violated at a "
                    "self-check point");
    }
  }

  return ApproxLowRank{std::move(obj), H, eta, eps_tilde, r, region_radius};
}

} // namespace lrgd
