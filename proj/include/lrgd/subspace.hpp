#ifndef LRGD_SUBSPACE_HPP
#define LRGD_SUBSPACE_HPP

#include <vector>

#include "lrgd/linalg.hpp"

namespace lrgd {

/// An r-dimensional subspace of R^p held as p x r orthonormal basis columns.
///
/// Basis vectors follow a sign convention (first nonzero coordinate of each
/// column is positive) so equal spans produce identical bases.
class Subspace {
public:
  /// `basis` must already have orthonormal columns (checked to 1e-10).
  explicit Subspace(Matrix basis);

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index rank() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  Vector basis_vector(Eigen::Index i) const { return basis_.col(i); }

  /// Orthogonal projection of v onto the subspace.
  Vector project(const Vector& v) const { return basis_ * (basis_.transpose() * v); }

  /// p x p projection matrix (for small p / tests).
  Matrix projector() const { return basis_ * basis_.transpose(); }

private:
  Matrix basis_;
};

/// Modified Gram-Schmidt with a second orthogonalization pass. Input vectors
/// whose residual norm is <= drop_tol are dropped, so rank-deficient inputs
/// yield a smaller basis. Throws DegenerateSampleError if nothing survives.
Subspace orthonormalize(const std::vector<Vector>& vectors, double drop_tol);

/// Default drop tolerance: 1e-10 times the largest input norm.
double default_drop_tol(const std::vector<Vector>& vectors);

/// The matrix G of column-normalized sampled gradients together with the raw
/// norms and the singular values of G (descending).
class GradientMatrix {
public:
  /// Normalizes each gradient; throws DegenerateSampleError when a gradient
  /// has zero norm.
  static GradientMatrix from_gradients(const std::vector<Vector>& gradients);

  Eigen::Index ambient_dim() const { return columns_.rows(); }
  Eigen::Index count() const { return columns_.cols(); }
  const Matrix& columns() const { return columns_; }
  const Vector& raw_norms() const { return raw_norms_; }
  const Vector& singular_values() const { return singular_values_; }

private:
  Matrix columns_;
  Vector raw_norms_;
  Vector singular_values_;
};

struct SvdBasis {
  Subspace span;
  Vector singular_values;
  bool rank_deficient = false; // some sigma_i < 1e-12 were dropped
};

/// Span of the dominant left singular vectors of G (thin SVD). Numerically
/// zero singular directions are dropped and flagged.
SvdBasis svd_left_basis(const GradientMatrix& G);

/// sigma_r, the smallest singular value of G.
double smallest_singular(const GradientMatrix& G);

/// Operator norm of the difference of the two orthogonal projectors,
/// in [0, 1] for equal dimensions; 0 iff the subspaces coincide.
double principal_angle_gap(const Subspace& a, const Subspace& b);

} // namespace lrgd

#endif
