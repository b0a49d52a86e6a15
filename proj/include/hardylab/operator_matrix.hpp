#pragma once

// Truncated operator matrices with an explicit trust region.

#include <algorithm>
#include <string>
#include <vector>

#include "hardylab/hardy_core.hpp"

namespace hardylab {

enum class BasisKind { Monomial, Model, Theta };

inline const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::Monomial: return "monomial";
    case BasisKind::Model: return "model";
    case BasisKind::Theta: return "theta";
  }
  return "unknown";
}

struct BasisTag {
  BasisKind kind = BasisKind::Monomial;
  std::string label;

  std::string str() const { return label.empty() ? to_string(kind) : std::string(to_string(kind)) + "(" + label + ")"; }
};

// Dense matrix (rows = output coordinates, cols = input coordinates).
//
// trust is the number of leading input columns on which the matrix agrees
// with the operator it stands for. When grades is non-empty, column j
// holds a vector of polynomial degree grades[j] (nondecreasing), and the
// operator raises degree by at most one; powers lose trust by grade.
struct OperatorMatrix {
  CMat entries;
  std::size_t in_order = 0;
  std::size_t out_order = 0;
  BasisTag basis;
  std::size_t trust = 0;
  std::vector<int> grades;

  OperatorMatrix() = default;
  OperatorMatrix(CMat m, BasisTag tag, std::size_t trusted, std::vector<int> g = {})
      : entries(std::move(m)), basis(std::move(tag)), trust(trusted), grades(std::move(g)) {
    in_order = static_cast<std::size_t>(entries.cols());
    out_order = static_cast<std::size_t>(entries.rows());
    if (trust > in_order) throw Error(ErrorKind::TrustViolation, "trust exceeds the input order");
    if (!grades.empty() && grades.size() != in_order) throw Error(ErrorKind::Degenerate, "grade list size mismatch");
  }

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
  bool square() const { return rows() == cols(); }

  CMat trusted_block() const { return entries.leftCols(static_cast<Eigen::Index>(trust)); }

  int grade(std::size_t j) const { return grades.empty() ? static_cast<int>(j) : grades[j]; }

  // Number of leading columns on which T^k is still exact.
  std::size_t trust_after(std::size_t k) const {
    if (k == 0) return in_order;
    if (trust == 0) return 0;
    const int top = grade(trust - 1) - static_cast<int>(k - 1);
    std::size_t t = 0;
    while (t < trust && grade(t) <= top) ++t;
    return t;
  }

  // Apply to x; leak accumulates the norm of x carried by untrusted columns.
  CVec apply(const CVec& x, double* leak = nullptr) const {
    if (leak) *leak += x.tail(cols() - static_cast<Eigen::Index>(trust)).norm();
    return entries * x;
  }
};

// Unilateral shift on polynomials of degree < N; the top column leaves the truncation.
inline OperatorMatrix shift_matrix(std::size_t N) {
  if (N < 1) throw Error(ErrorKind::InvalidOrder, "shift_matrix needs N >= 1");
  const auto n = static_cast<Eigen::Index>(N);
  CMat S = CMat::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) S(k + 1, k) = 1.0;
  return OperatorMatrix(std::move(S), {}, N - 1);
}

// Analytic Toeplitz operator T_u: N inputs, N + deg(u) outputs, exact on every column.
inline OperatorMatrix toeplitz_analytic(const CoefSeries& u, std::size_t N) {
  const long du = std::max<long>(u.degree(), 0);
  const auto n = static_cast<Eigen::Index>(N);
  const Eigen::Index rows = n + du;
  CMat T = CMat::Zero(rows, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k <= du; ++k) T(j + k, j) = u[static_cast<std::size_t>(k)];
  return OperatorMatrix(std::move(T), {}, N);
}

// Bilateral shift on the N-point frequency circle (a unitary circulant).
inline OperatorMatrix circulant_shift(std::size_t N) {
  const auto n = static_cast<Eigen::Index>(N);
  CMat U = CMat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) U((k + 1) % n, k) = 1.0;
  return OperatorMatrix(std::move(U), {}, N);
}

// v(T) for a square T; trust follows T^deg(v).
inline OperatorMatrix poly_of(const OperatorMatrix& T, const CoefSeries& v) {
  if (!T.square()) throw Error(ErrorKind::Degenerate, "poly_of needs a square operator");
  const long dv = std::max<long>(v.degree(), 0);
  CMat acc = CMat::Zero(T.rows(), T.cols());
  for (long k = dv; k >= 0; --k) {
    acc = T.entries * acc;
    acc.diagonal().array() += v[static_cast<std::size_t>(k)];
  }
  return OperatorMatrix(std::move(acc), T.basis, T.trust_after(static_cast<std::size_t>(dv)), T.grades);
}

}  // namespace hardylab
