#pragma once

#include "leftinv/algebra.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace leftinv {

/// Square matrix in the homogeneous representation of the group.
using GroupElement = Eigen::MatrixXd;

namespace detail {

/// Trig coefficient A = sin(t)/t, B = (1-cos(t))/t^2, C = (t-sin(t))/t^3 with
/// series fallback below the small-angle threshold.
struct RotationCoeffs {
  double a, b, c;
};

constexpr double small_angle = 1e-4;

inline RotationCoeffs rotation_coeffs(double theta) {
  RotationCoeffs k{};
  const double t2 = theta * theta;
  if (theta < small_angle) {
    k.a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    k.b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    k.c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  } else {
    k.a = std::sin(theta) / theta;
    k.b = (1.0 - std::cos(theta)) / t2;
    k.c = (theta - std::sin(theta)) / (t2 * theta);
  }
  return k;
}

inline double skew_angle(const Eigen::Matrix3d& w) {
  return std::sqrt(w(2, 1) * w(2, 1) + w(0, 2) * w(0, 2) + w(1, 0) * w(1, 0));
}

/// Rodrigues formula on a 3x3 skew matrix.
inline Eigen::Matrix3d rodrigues(const Eigen::Matrix3d& w) {
  const double theta = skew_angle(w);
  const RotationCoeffs k = rotation_coeffs(theta);
  return Eigen::Matrix3d::Identity() + k.a * w + k.b * (w * w);
}

/// V-matrix of the rigid-motion exponential: exp([w u; 0 0]) = [R Vu; 0 1].
inline Eigen::Matrix3d rodrigues_v(const Eigen::Matrix3d& w) {
  const double theta = skew_angle(w);
  const RotationCoeffs k = rotation_coeffs(theta);
  return Eigen::Matrix3d::Identity() + k.b * w + k.c * (w * w);
}

/// Principal skew logarithm of a rotation matrix. Throws for angles within
/// 1e-6 of pi, where the branch is ambiguous.
inline Eigen::Matrix3d so3_log_matrix(const Eigen::Matrix3d& r) {
  const double cos_theta = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  if (theta >= M_PI - 1e-6)
    throw std::domain_error("group_log: rotation angle too close to pi");
  double d; // theta / (2 sin(theta))
  if (theta < small_angle) {
    const double t2 = theta * theta;
    d = 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
  } else {
    d = 0.5 * theta / std::sin(theta);
  }
  return d * (r - r.transpose());
}

/// Inverse of the V-matrix, valid for angles below pi.
inline Eigen::Matrix3d rodrigues_v_inverse(const Eigen::Matrix3d& w) {
  const double theta = skew_angle(w);
  double e;
  if (theta < small_angle) {
    const double t2 = theta * theta;
    e = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    const RotationCoeffs k = rotation_coeffs(theta);
    e = (1.0 - k.a / (2.0 * k.b)) / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() - 0.5 * w + e * (w * w);
}

/// Scaling-and-squaring Taylor exponential; the untuned generic path.
inline Eigen::MatrixXd series_exp(const Eigen::MatrixXd& m, int terms = 24) {
  int squarings = 0;
  double norm = m.norm();
  while (norm > 0.5 && squarings < 60) {
    norm *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd a = m / std::ldexp(1.0, squarings);
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd term = result;
  for (int k = 1; k <= terms; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

} // namespace detail

inline GroupElement identity(const LieGroupStructure& s) {
  return Eigen::MatrixXd::Identity(s.matrix_size(), s.matrix_size());
}

/// Group composition; plain matrix product.
inline GroupElement compose(const GroupElement& a, const GroupElement& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("compose: size mismatch");
  return a * b;
}

/// Closed-form inverse: (R,t) -> (R^T, -R^T t) for rigid motions, transpose
/// for rotations. Never falls back to generic matrix inversion.
inline GroupElement inverse(const LieGroupStructure& s, const GroupElement& g) {
  switch (s.kind()) {
    case GroupKind::Rotations3:
      return g.transpose();
    case GroupKind::RigidMotions3: {
      const int n = s.matrix_size();
      const Eigen::Matrix3d rt = g.topLeftCorner(3, 3).transpose();
      Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
      out.topLeftCorner(3, 3) = rt;
      out.topRightCorner(3, 1) = -rt * g.topRightCorner(3, 1);
      return out;
    }
    case GroupKind::Generic:
      break;
  }
  throw std::logic_error("inverse: no closed form for generic groups");
}

/// Rotation angle of the (block) rotation part, in [0, pi].
inline double rotation_angle(const LieGroupStructure& s, const GroupElement& g) {
  Eigen::Matrix3d r;
  switch (s.kind()) {
    case GroupKind::Rotations3:
      r = g;
      break;
    case GroupKind::RigidMotions3:
      r = g.topLeftCorner(3, 3);
      break;
    case GroupKind::Generic:
      throw std::logic_error("rotation_angle: undefined for generic groups");
  }
  return std::acos(std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0));
}

/// Group (matrix) exponential of an algebra element given in coordinates.
/// Closed Rodrigues-type forms for rotations and rigid motions; series
/// fallback for generic structures.
inline GroupElement group_exp(const LieGroupStructure& s, const AlgebraVector& x) {
  const Eigen::MatrixXd m = s.coords_to_matrix(x);
  switch (s.kind()) {
    case GroupKind::Rotations3:
      return detail::rodrigues(m);
    case GroupKind::RigidMotions3: {
      const Eigen::Matrix3d w = m.topLeftCorner(3, 3);
      Eigen::MatrixXd out = Eigen::MatrixXd::Identity(4, 4);
      out.topLeftCorner(3, 3) = detail::rodrigues(w);
      out.topRightCorner(3, 1) = detail::rodrigues_v(w) * m.topRightCorner(3, 1);
      return out;
    }
    case GroupKind::Generic:
      return detail::series_exp(m);
  }
  throw std::logic_error("group_exp: unreachable");
}

/// Principal-branch group logarithm; inverse of group_exp for rotation angles
/// strictly below pi. Callers needing larger displacements must subdivide.
inline AlgebraVector group_log(const LieGroupStructure& s, const GroupElement& g) {
  switch (s.kind()) {
    case GroupKind::Rotations3:
      return s.matrix_to_coords(detail::so3_log_matrix(g));
    case GroupKind::RigidMotions3: {
      const Eigen::Matrix3d w = detail::so3_log_matrix(g.topLeftCorner(3, 3));
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
      m.topLeftCorner(3, 3) = w;
      m.topRightCorner(3, 1) = detail::rodrigues_v_inverse(w) * g.topRightCorner(3, 1);
      return s.matrix_to_coords(m);
    }
    case GroupKind::Generic:
      throw std::logic_error("group_log: no closed form for generic groups");
  }
  throw std::logic_error("group_log: unreachable");
}

/// Maurer-Cartan form: pulls a tangent matrix at g back to the algebra,
/// theta|_g(v) = (dL_g)^-1 v. Throws if g^-1 v leaves span(basis).
inline AlgebraVector maurer_cartan(const LieGroupStructure& s, const GroupElement& g,
                                   const Eigen::MatrixXd& v) {
  return s.matrix_to_coords(inverse(s, g) * v);
}

/// Differential of left translation: dL_g x = g * x^ as a tangent matrix at g.
inline Eigen::MatrixXd left_translate(const LieGroupStructure& s, const GroupElement& g,
                                      const AlgebraVector& x) {
  return g * s.coords_to_matrix(x);
}

/// Snaps the rotation block to the nearest rotation (polar decomposition via
/// SVD); long embedded-space integrations can opt in to this periodically.
inline GroupElement project_to_group(const LieGroupStructure& s, const GroupElement& g) {
  auto nearest_rotation = [](const Eigen::Matrix3d& r) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d uv = svd.matrixU() * svd.matrixV().transpose();
    if (uv.determinant() < 0.0) {
      Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
      flip(2, 2) = -1.0;
      uv = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return uv;
  };
  switch (s.kind()) {
    case GroupKind::Rotations3:
      return nearest_rotation(g);
    case GroupKind::RigidMotions3: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Identity(4, 4);
      out.topLeftCorner(3, 3) = nearest_rotation(g.topLeftCorner(3, 3));
      out.topRightCorner(3, 1) = g.topRightCorner(3, 1);
      return out;
    }
    case GroupKind::Generic:
      throw std::logic_error("project_to_group: undefined for generic groups");
  }
  throw std::logic_error("project_to_group: unreachable");
}

} // namespace leftinv
