#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <cmath>
#include <vector>

#include "epiloc/error.hpp"

// Rotation, pose and ray primitives.
//
// Conventions used throughout:
//  - A pose maps world points into the camera frame, x_cam = R * x + t.
//    The camera center in world coordinates is therefore c = -R^T * t.
//  - Quaternions are kept on the canonical hemisphere: w >= 0, and if w == 0
//    the first nonzero component among (x, y, z) is positive. This makes the
//    two-to-one quaternion cover unique, so serialized poses compare bitwise.
//  - Angles cross the API in degrees; radians stay internal.

namespace epiloc {

template <class T> using Mat3T = Eigen::Matrix<T, 3, 3>;
template <class T> using Vec3T = Eigen::Matrix<T, 3, 1>;
template <class T> using Vec2T = Eigen::Matrix<T, 2, 1>;
template <class T> using QuatT = Eigen::Quaternion<T>;

using Mat3 = Mat3T<double>;
using Vec3 = Vec3T<double>;
using Vec2 = Vec2T<double>;
using Quat = QuatT<double>;

template <class T> constexpr T deg_to_rad(T deg) { return deg * T(EIGEN_PI) / T(180); }
template <class T> constexpr T rad_to_deg(T rad) { return rad * T(180) / T(EIGEN_PI); }

// std::clamp on the cosine before acos; SVD/trace arithmetic routinely lands
// a hair outside [-1, 1].
template <class T>
T clamped_acos(T c) {
  return std::acos(std::min(T(1), std::max(T(-1), c)));
}

template <class T>
struct PoseT {
  Mat3T<T> rotation = Mat3T<T>::Identity();
  Vec3T<T> translation = Vec3T<T>::Zero();

  Vec3T<T> apply(const Vec3T<T>& x_world) const { return rotation * x_world + translation; }
};

// Relative pose between two cameras, translation reduced to its direction
// (the epipolar geometry fixes it only up to scale).
template <class T>
struct RelativePoseT {
  Mat3T<T> rotation = Mat3T<T>::Identity();
  Vec3T<T> direction = Vec3T<T>::UnitX();  // unit norm
};

template <class T>
struct RayT {
  Vec3T<T> origin = Vec3T<T>::Zero();
  Vec3T<T> direction = Vec3T<T>::UnitX();  // unit norm
};

using Pose = PoseT<double>;
using RelativePose = RelativePoseT<double>;
using Ray = RayT<double>;

template <class T>
QuatT<T> canonical_quaternion(const QuatT<T>& q) {
  const T* c = q.coeffs().data();  // x y z w
  bool flip = false;
  if (c[3] < T(0)) {
    flip = true;
  } else if (c[3] == T(0)) {
    for (int i = 0; i < 3; ++i) {
      if (c[i] != T(0)) {
        flip = c[i] < T(0);
        break;
      }
    }
  }
  return flip ? QuatT<T>(-q.w(), -q.x(), -q.y(), -q.z()) : q;
}

template <class Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& m,
                 typename Derived::Scalar tol = typename Derived::Scalar(1e-6)) {
  using T = typename Derived::Scalar;
  const Mat3T<T> r = m;
  return (r.transpose() * r - Mat3T<T>::Identity()).norm() <= tol &&
         std::abs(r.determinant() - T(1)) <= tol;
}

template <class T>
Mat3T<T> rotation_from_quaternion(const QuatT<T>& q) {
  if (std::abs(q.norm() - T(1)) > T(1e-9))
    throw InvalidRotationError("quaternion is not unit norm");
  return q.toRotationMatrix();
}

template <class Derived>
QuatT<typename Derived::Scalar> quaternion_from_rotation(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  const Mat3T<T> r = m;
  if (!is_rotation(r))
    throw InvalidRotationError("matrix is not a rotation (orthonormal, det +1)");
  return canonical_quaternion(QuatT<T>(r));
}

// Geodesic distance between rotations in degrees. atan2 of the skew and trace
// parts stays accurate where plain acos((tr-1)/2) loses half the significant
// digits (near 0 and near 180).
template <class DA, class DB>
typename DA::Scalar angular_distance_deg(const Eigen::MatrixBase<DA>& a,
                                         const Eigen::MatrixBase<DB>& b) {
  using T = typename DA::Scalar;
  const Mat3T<T> m = Mat3T<T>(a).transpose() * Mat3T<T>(b);
  const Vec3T<T> v(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const T s = T(0.5) * v.norm();
  const T c = T(0.5) * (m.trace() - T(1));
  return rad_to_deg(std::atan2(s, std::min(T(1), std::max(T(-1), c))));
}

template <class T>
T angular_distance_deg(const QuatT<T>& a, const QuatT<T>& b) {
  return rad_to_deg(a.angularDistance(b));
}

template <class T>
Vec3T<T> camera_center(const PoseT<T>& pose) {
  return -(pose.rotation.transpose() * pose.translation);
}

// Pose of `query` relative to `db`: x_query = R * x_db + s * direction for
// some positive scale s. Defined only for distinct camera centers.
template <class T>
RelativePoseT<T> relative_pose(const PoseT<T>& db, const PoseT<T>& query) {
  RelativePoseT<T> rel;
  rel.rotation = query.rotation * db.rotation.transpose();
  const Vec3T<T> t = query.translation - rel.rotation * db.translation;
  const T n = t.norm();
  if (n < T(1e-12))
    throw DegeneratePairError("relative pose undefined for coincident camera centers");
  rel.direction = t / n;
  return rel;
}

// Chordal L2 mean of unit quaternions: the dominant eigenvector of the sum of
// outer products, after aligning every input onto the hemisphere of the first.
template <class T>
QuatT<T> chordal_mean(const std::vector<QuatT<T>>& qs) {
  if (qs.empty()) throw InvalidRotationError("chordal mean of empty set");
  Eigen::Matrix<T, 4, 4> acc = Eigen::Matrix<T, 4, 4>::Zero();
  const Eigen::Matrix<T, 4, 1> ref = qs.front().coeffs();
  for (const QuatT<T>& q : qs) {
    Eigen::Matrix<T, 4, 1> v = q.coeffs();
    if (ref.dot(v) < T(0)) v = -v;
    acc += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<T, 4, 4>> eig(acc);
  const Eigen::Matrix<T, 4, 1> mean = eig.eigenvectors().col(3);
  QuatT<T> q;
  q.coeffs() = mean.normalized();
  return canonical_quaternion(q);
}

}  // namespace epiloc
