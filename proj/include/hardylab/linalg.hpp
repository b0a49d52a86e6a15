#pragma once

// Dense linear algebra helpers built on Eigen: gap-checked numerical kernels,
// orthonormalization, null spaces and principal angles.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "hardylab/common.hpp"

namespace hardylab {

inline constexpr double kDefaultKernelTol = 1e-10;
inline constexpr double kDefaultGapFactor = 1e3;

struct KernelResult {
  CMat basis;                   // orthonormal columns spanning the numerical kernel
  RVec singular_values;         // descending, padded with zeros up to the column count
  double threshold = 0.0;       // tol * sigma_max
  bool determinate = true;      // false when no clear singular-value gap exists
  double smallest_kept = 0.0;   // smallest singular value above the threshold (0 if none)
  double largest_dropped = 0.0; // largest singular value below the threshold (0 if none)

  std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
};

// Right singular vectors with singular value below tol * sigma_max.
//
// A dimension is only claimed when the smallest retained singular value
// clears the threshold by gap_factor; otherwise determinate is false.
// For wide matrices the missing singular values count as zeros.
inline KernelResult numeric_kernel(const CMat& A, double tol = kDefaultKernelTol,
                                   double gap_factor = kDefaultGapFactor) {
  KernelResult res;
  const Eigen::Index n = A.cols();
  if (n == 0) return res;
  if (A.rows() == 0) {
    res.basis = CMat::Identity(n, n);
    res.singular_values = RVec::Zero(n);
    return res;
  }
  Eigen::BDCSVD<CMat> svd(A, Eigen::ComputeFullV);
  RVec s = RVec::Zero(n);
  s.head(svd.singularValues().size()) = svd.singularValues();
  res.singular_values = s;
  const double smax = s.size() ? s[0] : 0.0;
  res.threshold = tol * smax;
  Eigen::Index rank = 0;
  while (rank < n && s[rank] >= res.threshold && s[rank] > 0.0) ++rank;
  res.smallest_kept = rank > 0 ? s[rank - 1] : 0.0;
  res.largest_dropped = rank < n ? s[rank] : 0.0;
  if (rank > 0 && res.smallest_kept < gap_factor * res.threshold) res.determinate = false;
  res.basis = svd.matrixV().rightCols(n - rank);
  return res;
}

// Orthonormal basis for the column span, rank decided at rel_tol.
inline CMat orthonormalize(const CMat& A, double rel_tol = 1e-12) {
  if (A.cols() == 0) return A;
  Eigen::ColPivHouseholderQR<CMat> qr(A);
  qr.setThreshold(rel_tol);
  const Eigen::Index r = qr.rank();
  CMat Q = qr.householderQ() * CMat::Identity(A.rows(), r);
  return Q;
}

// Orthonormal basis of {x : A x = 0}, rank decided at rel_tol.
inline CMat null_space(const CMat& A, double rel_tol = 1e-12) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return CMat::Identity(n, n);
  CMat At = A.adjoint();
  Eigen::ColPivHouseholderQR<CMat> qr(At);
  qr.setThreshold(rel_tol);
  const Eigen::Index r = qr.rank();
  CMat Q = qr.householderQ();
  return Q.rightCols(n - r);
}

// Sine of the largest principal angle between span(A) and span(B),
// measured from A's side (dim A <= dim B expected).
inline double principal_angle_sine(const CMat& A, const CMat& B) {
  const CMat Qa = orthonormalize(A);
  const CMat Qb = orthonormalize(B);
  if (Qa.cols() == 0) return 0.0;
  const CMat R = Qa - Qb * (Qb.adjoint() * Qa);
  Eigen::JacobiSVD<CMat> svd(R);
  return std::min(1.0, svd.singularValues()[0]);
}

inline double principal_angle(const CMat& A, const CMat& B) { return std::asin(principal_angle_sine(A, B)); }

inline double principal_angle(const CVec& a, const CVec& b) {
  return principal_angle(CMat(a), CMat(b));
}

inline double operator_norm(const CMat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(A);
  return svd.singularValues()[0];
}

inline double smallest_singular_value(const CMat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(A);
  const auto& s = svd.singularValues();
  return A.rows() < A.cols() ? 0.0 : s[s.size() - 1];
}

}  // namespace hardylab
