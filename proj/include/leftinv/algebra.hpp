#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace leftinv {

/// Coordinate vector in the orthonormal basis of the Lie algebra.
using AlgebraVector = Eigen::VectorXd;

/// Matrix representation of an algebra element (matrix_size x matrix_size).
using AlgebraMatrix = Eigen::MatrixXd;

/// Selects the closed-form exp/log family for the group operations.
enum class GroupKind {
  Rotations3,    // 3x3 special orthogonal
  RigidMotions3, // 4x4 homogeneous rigid motions
  Generic        // series exponential only
};

namespace detail {

inline double frobenius_dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

} // namespace detail

/// Immutable description of a matrix Lie group with a left-invariant metric:
/// the basis of its algebra (orthonormal under the metric), the precomputed
/// structure constants C_ij^k = <[e_i,e_j], e_k>, and the anisotropy beta.
///
/// The metric matrix in these coordinates is the identity; any anisotropy is
/// absorbed into the normalization of the basis matrices. All members are
/// fixed at construction, so instances can be shared freely across threads.
class LieGroupStructure {
 public:
  /// Builds a structure from a linearly independent basis. The basis need not
  /// be orthogonal in the Frobenius sense; coordinates are always taken with
  /// respect to exactly these matrices.
  static LieGroupStructure from_basis(std::vector<Eigen::MatrixXd> basis,
                                      double beta = 1.0,
                                      GroupKind kind = GroupKind::Generic) {
    return LieGroupStructure(std::move(basis), beta, kind);
  }

  int dim() const { return dim_; }
  int matrix_size() const { return matrix_size_; }
  double beta() const { return beta_; }
  GroupKind kind() const { return kind_; }
  const std::vector<Eigen::MatrixXd>& basis() const { return basis_; }

  /// C_ij^k. Indices are 0-based and unchecked.
  double structure_constant(int i, int j, int k) const {
    return constants_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }

  /// Frobenius residual above which a matrix is rejected as outside span(basis).
  static constexpr double span_tolerance = 1e-9;

  /// Expands coordinates into the matrix representation.
  Eigen::MatrixXd coords_to_matrix(const AlgebraVector& x) const {
    check_dim(x);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(matrix_size_, matrix_size_);
    for (int i = 0; i < dim_; ++i) m += x[i] * basis_[i];
    return m;
  }

  /// Projects a matrix onto coordinates in the basis. Throws std::domain_error
  /// if the matrix is farther than span_tolerance (Frobenius) from span(basis),
  /// which signals a tangent vector that left the algebra.
  AlgebraVector matrix_to_coords(const Eigen::MatrixXd& m) const {
    if (m.rows() != matrix_size_ || m.cols() != matrix_size_)
      throw std::invalid_argument("matrix_to_coords: wrong matrix size");
    Eigen::VectorXd b(dim_);
    for (int i = 0; i < dim_; ++i) b[i] = detail::frobenius_dot(ortho_basis_[i], m);
    AlgebraVector coords =
        rfactor_.triangularView<Eigen::Upper>().solve(b);
    Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(matrix_size_, matrix_size_);
    for (int i = 0; i < dim_; ++i) recon += coords[i] * basis_[i];
    const double residual = (m - recon).norm();
    if (residual > span_tolerance)
      throw std::domain_error("matrix_to_coords: matrix outside span(basis), residual " +
                              std::to_string(residual));
    return coords;
  }

  void check_dim(const AlgebraVector& x) const {
    if (x.size() != dim_)
      throw std::invalid_argument("algebra vector has wrong dimension");
  }

 private:
  LieGroupStructure(std::vector<Eigen::MatrixXd> basis, double beta, GroupKind kind)
      : basis_(std::move(basis)), beta_(beta), kind_(kind) {
    if (basis_.empty()) throw std::invalid_argument("empty basis");
    dim_ = static_cast<int>(basis_.size());
    matrix_size_ = static_cast<int>(basis_.front().rows());
    for (const auto& e : basis_)
      if (e.rows() != matrix_size_ || e.cols() != matrix_size_)
        throw std::invalid_argument("basis matrices must be square and equally sized");

    // Frobenius-orthonormalized copy (modified Gram-Schmidt) used for the
    // span projection; rfactor_ maps projections back to basis coordinates.
    ortho_basis_.resize(dim_);
    rfactor_ = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
      Eigen::MatrixXd w = basis_[j];
      for (int i = 0; i < j; ++i) {
        rfactor_(i, j) = detail::frobenius_dot(ortho_basis_[i], w);
        w -= rfactor_(i, j) * ortho_basis_[i];
      }
      rfactor_(j, j) = w.norm();
      if (rfactor_(j, j) < 1e-12)
        throw std::invalid_argument("basis matrices are not linearly independent");
      ortho_basis_[j] = w / rfactor_(j, j);
    }

    // C_ij^k from the matrix commutator; the j<i half is filled by
    // antisymmetry so that C_ij^k = -C_ji^k holds bit-exactly.
    constants_.assign(static_cast<std::size_t>(dim_) * dim_ * dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
      for (int j = i + 1; j < dim_; ++j) {
        const Eigen::MatrixXd comm = basis_[i] * basis_[j] - basis_[j] * basis_[i];
        const AlgebraVector c = matrix_to_coords(comm);
        for (int k = 0; k < dim_; ++k) {
          constants_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k] = c[k];
          constants_[(static_cast<std::size_t>(j) * dim_ + i) * dim_ + k] = -c[k];
        }
      }
    }
  }

  std::vector<Eigen::MatrixXd> basis_;
  std::vector<Eigen::MatrixXd> ortho_basis_;
  Eigen::MatrixXd rfactor_;
  std::vector<double> constants_;
  double beta_ = 1.0;
  GroupKind kind_ = GroupKind::Generic;
  int dim_ = 0;
  int matrix_size_ = 0;
};

/// The 6-dimensional algebra of rigid motions with metric anisotropy beta on
/// the first translational direction: rotational generators scaled by 1/sqrt(2),
/// e4 scaled by 1/sqrt(beta), e5/e6 unit translations. The basis is orthonormal
/// under the metric, so the beta-weighting lives entirely in e4.
inline LieGroupStructure build_se3_structure(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::MatrixXd> basis(6, Eigen::MatrixXd::Zero(4, 4));
  basis[0](1, 2) = -r;
  basis[0](2, 1) = r;
  basis[1](0, 2) = r;
  basis[1](2, 0) = -r;
  basis[2](0, 1) = -r;
  basis[2](1, 0) = r;
  basis[3](0, 3) = 1.0 / std::sqrt(beta);
  basis[4](1, 3) = 1.0;
  basis[5](2, 3) = 1.0;
  return LieGroupStructure::from_basis(std::move(basis), beta, GroupKind::RigidMotions3);
}

/// The 3-dimensional rotation algebra with generators scaled by 1/sqrt(2).
/// The resulting metric is bi-invariant.
inline LieGroupStructure build_so3_structure() {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::MatrixXd> basis(3, Eigen::MatrixXd::Zero(3, 3));
  basis[0](1, 2) = -r;
  basis[0](2, 1) = r;
  basis[1](0, 2) = r;
  basis[1](2, 0) = -r;
  basis[2](0, 1) = -r;
  basis[2](1, 0) = r;
  return LieGroupStructure::from_basis(std::move(basis), 1.0, GroupKind::Rotations3);
}

/// Metric inner product; the basis is orthonormal, so this is the dot product
/// of coordinate vectors.
inline double inner(const LieGroupStructure& s, const AlgebraVector& x,
                    const AlgebraVector& y) {
  s.check_dim(x);
  s.check_dim(y);
  return x.dot(y);
}

inline double metric_norm(const LieGroupStructure& s, const AlgebraVector& x) {
  return std::sqrt(inner(s, x, x));
}

/// Lie bracket in coordinates: [x,y]_k = sum_ij x_i y_j C_ij^k. Agrees with
/// the matrix commutator of the expanded representatives.
inline AlgebraVector bracket(const LieGroupStructure& s, const AlgebraVector& x,
                             const AlgebraVector& y) {
  s.check_dim(x);
  s.check_dim(y);
  const int n = s.dim();
  AlgebraVector out = AlgebraVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j] == 0.0) continue;
      const double xy = x[i] * y[j];
      for (int k = 0; k < n; ++k) out[k] += xy * s.structure_constant(i, j, k);
    }
  }
  return out;
}

/// Metric dual of the adjoint map: the unique vector with
/// <ad_star(a,b), c> = <b, [a,c]> for all c. Componentwise
/// (ad*_a b)_k = sum_ij a_i b_j C_ik^j.
inline AlgebraVector ad_star(const LieGroupStructure& s, const AlgebraVector& a,
                             const AlgebraVector& b) {
  s.check_dim(a);
  s.check_dim(b);
  const int n = s.dim();
  AlgebraVector out = AlgebraVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j] == 0.0) continue;
      const double ab = a[i] * b[j];
      for (int k = 0; k < n; ++k) out[k] += ab * s.structure_constant(i, k, j);
    }
  }
  return out;
}

/// Bilinear form of the Levi-Civita connection on left-invariant fields:
/// alpha(x,y) = 1/2 ([x,y] - ad*_x y - ad*_y x). Torsion-free and
/// metric-compatible by construction.
inline AlgebraVector connection_alpha(const LieGroupStructure& s, const AlgebraVector& x,
                                      const AlgebraVector& y) {
  return 0.5 * (bracket(s, x, y) - ad_star(s, x, y) - ad_star(s, y, x));
}

inline Eigen::MatrixXd coords_to_matrix(const LieGroupStructure& s, const AlgebraVector& x) {
  return s.coords_to_matrix(x);
}

inline AlgebraVector matrix_to_coords(const LieGroupStructure& s, const Eigen::MatrixXd& m) {
  return s.matrix_to_coords(m);
}

} // namespace leftinv
