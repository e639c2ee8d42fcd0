#include "lrgd/subspace.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace lrgd {

namespace {

// First nonzero coordinate of each column made positive; spans unchanged.
void fix_column_signs(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (v != 0.0) {
        if (v < 0.0) m.col(j) = -m.col(j);
        break;
      }
    }
  }
}

} // namespace

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.rows() < basis_.cols())
    throw Error("Subspace: need 1 <= r <= p basis vectors");
  const Matrix gram = basis_.transpose() * basis_;
  const double err =
      (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10)
    throw Error("Subspace: basis not orthonormal (gram error " +
                std::to_string(err) + ")");
  fix_column_signs(basis_);
}

double default_drop_tol(const std::vector<Vector>& vectors) {
  double max_norm = 0.0;
  for (const auto& v : vectors) max_norm = std::max(max_norm, v.norm());
  return 1e-10 * max_norm;
}

Subspace orthonormalize(const std::vector<Vector>& vectors, double drop_tol) {
  if (vectors.empty()) throw Error("orthonormalize: no input vectors");
  const Eigen::Index p = vectors.front().size();
  std::vector<Vector> basis;
  basis.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != p) throw Error("orthonormalize: dimension mismatch");
    Vector w = v;
    // two passes of projection removal keep the Gram error near roundoff
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    const double n = w.norm();
    if (n <= drop_tol) continue;
    basis.push_back(w / n);
  }
  if (basis.empty())
    throw DegenerateSampleError(
        "degenerate sample: all vectors below drop tolerance");
  Matrix m(p, static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) = basis[j];
  return Subspace(std::move(m));
}

GradientMatrix GradientMatrix::from_gradients(
    const std::vector<Vector>& gradients) {
  if (gradients.empty())
    throw Error("GradientMatrix: need at least one gradient");
  const Eigen::Index p = gradients.front().size();
  GradientMatrix G;
  G.columns_.resize(p, static_cast<Eigen::Index>(gradients.size()));
  G.raw_norms_.resize(static_cast<Eigen::Index>(gradients.size()));
  for (Eigen::Index j = 0; j < G.columns_.cols(); ++j) {
    const Vector& g = gradients[static_cast<std::size_t>(j)];
    if (g.size() != p) throw Error("GradientMatrix: dimension mismatch");
    if (!all_finite(g)) throw Error("GradientMatrix: non-finite gradient");
    const double n = g.norm();
    if (n == 0.0)
      throw DegenerateSampleError("degenerate sample: zero gradient column");
    G.columns_.col(j) = g / n;
    G.raw_norms_[j] = n;
  }
  Eigen::JacobiSVD<Matrix> svd(G.columns_);
  G.singular_values_ = svd.singularValues();
  return G;
}

SvdBasis svd_left_basis(const GradientMatrix& G) {
  Eigen::JacobiSVD<Matrix> svd(G.columns(), Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  Eigen::Index keep = 0;
  while (keep < sigma.size() && sigma[keep] >= 1e-12) ++keep;
  SvdBasis out{Subspace(svd.matrixU().leftCols(std::max<Eigen::Index>(keep, 1))),
               sigma, keep < sigma.size()};
  return out;
}

double smallest_singular(const GradientMatrix& G) {
  return G.singular_values()[G.singular_values().size() - 1];
}

double principal_angle_gap(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error("principal_angle_gap: ambient dimension mismatch");
  const Matrix diff = a.projector() - b.projector();
  Eigen::BDCSVD<Matrix> svd(diff);
  const double gap = svd.singularValues()[0];
  return a.rank() == b.rank() ? std::min(gap, 1.0) : gap;
}

} // namespace lrgd
