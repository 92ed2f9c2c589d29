#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>

#include <array>
#include <cmath>

#include "epiloc/error.hpp"
#include "epiloc/geometry.hpp"

// Essential matrix construction, projection, decomposition and comparison.
//
// An essential matrix E relates calibrated rays of two cameras through
// x_query^T * E * x_db = 0 and factors as E = [t]_x * R where (R, t) is the
// db-to-query relative pose. Valid E have singular values (s, s, 0); we keep
// them normalized to Frobenius norm sqrt(2), i.e. s = 1.

namespace epiloc {

template <class Derived>
Mat3T<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& v) {
  using T = typename Derived::Scalar;
  Mat3T<T> m;
  m << T(0), -v[2], v[1],
       v[2], T(0), -v[0],
      -v[1], v[0], T(0);
  return m;
}

// E = [direction]_x * rotation. Unit direction makes the Frobenius norm
// sqrt(2) automatically.
template <class T>
Mat3T<T> essential_from_relative(const RelativePoseT<T>& rel) {
  return skew(rel.direction) * rel.rotation;
}

template <class Derived>
bool is_essential(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::Scalar tol = typename Derived::Scalar(1e-6)) {
  using T = typename Derived::Scalar;
  Eigen::JacobiSVD<Mat3T<T>> svd(m);
  const Vec3T<T> s = svd.singularValues();
  return std::abs(s[0] - T(1)) <= tol && std::abs(s[1] - T(1)) <= tol &&
         std::abs(s[2]) <= tol;
}

// Nearest valid essential matrix: replace the two large singular values by
// their mean, zero the smallest, rescale to Frobenius norm sqrt(2).
// Idempotent; invariant to positive input scale. Inputs of rank <= 1 have no
// meaningful projection and are rejected.
template <class Derived>
Mat3T<typename Derived::Scalar> project_to_essential(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  Eigen::JacobiSVD<Mat3T<T>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3T<T> s = svd.singularValues();
  if (s[1] <= T(1e-12) * s[0] || s[0] == T(0))
    throw DegenerateMatrixError("matrix has rank <= 1, cannot project to essential");
  const T mean = (s[0] + s[1]) / T(2);
  Mat3T<T> e = svd.matrixU() * Vec3T<T>(mean, mean, T(0)).asDiagonal() * svd.matrixV().transpose();
  return e * (std::sqrt(T(2)) / e.norm());
}

// Frobenius distance on the sign quotient: E and -E encode the same epipolar
// constraint, so compare against the closer of the two.
template <class DA, class DB>
typename DA::Scalar essential_distance(const Eigen::MatrixBase<DA>& a,
                                       const Eigen::MatrixBase<DB>& b) {
  using T = typename DA::Scalar;
  const Mat3T<T> am = a, bm = b;
  return std::min((am - bm).norm(), (am + bm).norm());
}

// The four relative poses compatible with an essential matrix, ordered
// (R, t), (R, -t), (R', t), (R', -t). R and R' differ by a half turn about
// the translation axis expressed in the db frame.
template <class T>
struct PoseCandidatesT {
  std::array<RelativePoseT<T>, 4> candidates;
};

using PoseCandidates = PoseCandidatesT<double>;

template <class Derived>
PoseCandidatesT<typename Derived::Scalar> decompose_essential(const Eigen::MatrixBase<Derived>& e) {
  using T = typename Derived::Scalar;
  if (!is_essential(e))
    throw InvalidEssentialError("singular values are not (1, 1, 0)");

  Eigen::JacobiSVD<Mat3T<T>> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3T<T> u = svd.matrixU();
  Mat3T<T> v = svd.matrixV();
  // Flipping the null-space columns changes neither E nor U*diag*V^T but
  // makes both factors proper rotations.
  if (u.determinant() < T(0)) u.col(2) = -u.col(2);
  if (v.determinant() < T(0)) v.col(2) = -v.col(2);

  Mat3T<T> w;
  w << T(0), T(-1), T(0),
       T(1), T(0), T(0),
       T(0), T(0), T(1);

  const Mat3T<T> r1 = u * w * v.transpose();
  const Mat3T<T> r2 = u * w.transpose() * v.transpose();
  const Vec3T<T> t = u.col(2);

  PoseCandidatesT<T> out;
  out.candidates[0] = {r1, t};
  out.candidates[1] = {r1, -t};
  out.candidates[2] = {r2, t};
  out.candidates[3] = {r2, -t};
  return out;
}

}  // namespace epiloc
