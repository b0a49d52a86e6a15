#pragma once

// Polynomial utilities: companion-matrix root finding with Newton polishing
// and a per-root conditioning report, plus small helpers for products,
// deflation and rational-function evaluation.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hardylab/hardy_core.hpp"

namespace hardylab {

struct RootReport {
  std::vector<cplx> roots;
  std::vector<double> backward_error;  // |p(r)| / sum |p_k| |r|^k
  std::vector<double> condition;       // sum |p_k| |r|^k / (|r| |p'(r)|)
  double max_backward_error = 0.0;
  std::size_t zero_roots = 0;  // exact roots at the origin, stripped before the eigen solve
};

// Drops trailing (highest-degree) coefficients below rel_tol * max|c|.
inline CoefSeries poly_trim(const CoefSeries& p, double rel_tol = 1e-14) {
  const double scale = p.empty() ? 0.0 : p.coeffs().cwiseAbs().maxCoeff();
  long d = static_cast<long>(p.size()) - 1;
  while (d > 0 && std::abs(p[static_cast<std::size_t>(d)]) <= rel_tol * scale) --d;
  return p.resized(static_cast<std::size_t>(std::max<long>(d, 0)) + 1);
}

inline long poly_degree(const CoefSeries& p, double rel_tol = 1e-14) {
  if (p.empty() || p.coeffs().cwiseAbs().maxCoeff() == 0.0) return -1;
  return static_cast<long>(poly_trim(p, rel_tol).size()) - 1;
}

inline CoefSeries poly_from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
  CoefSeries p = CoefSeries::constant(lead);
  for (const cplx& r : roots) p = series_multiply(p, CoefSeries{-r, 1.0});
  return p;
}

// Synthetic division by (z - r); the remainder is discarded.
inline CoefSeries poly_deflate(const CoefSeries& p, cplx r) {
  const std::size_t n = p.size();
  if (n < 2) return CoefSeries::constant(0.0);
  CoefSeries q(n - 1);
  cplx acc = p[n - 1];
  q[n - 2] = acc;
  for (std::size_t k = n - 2; k >= 1; --k) {
    acc = p[k] + r * acc;
    q[k - 1] = acc;
  }
  return q;
}

inline cplx poly_derivative_at(const CoefSeries& p, cplx z) {
  cplx acc = 0.0;
  for (long k = static_cast<long>(p.size()) - 1; k >= 1; --k)
    acc = acc * z + static_cast<double>(k) * p[static_cast<std::size_t>(k)];
  return acc;
}

inline double poly_abs_eval(const CoefSeries& p, double r) {
  double acc = 0.0;
  for (long k = static_cast<long>(p.size()) - 1; k >= 0; --k) acc = acc * r + std::abs(p[static_cast<std::size_t>(k)]);
  return acc;
}

// Roots of a polynomial given by ascending coefficients.
//
// Exact zeros at the origin are split off first; the rest come from the
// eigenvalues of the companion matrix, refined by a few Newton steps on the
// original coefficients. Throws NumericalFailure if the degree exceeds
// degree_cap or any polished root keeps a backward error above 1e-8.
inline RootReport polynomial_roots(const CoefSeries& p_in, std::size_t degree_cap = 64) {
  const CoefSeries p = poly_trim(p_in);
  RootReport rep;
  const long deg = poly_degree(p);
  if (deg < 0) throw Error(ErrorKind::Degenerate, "roots of the zero polynomial");
  if (static_cast<std::size_t>(deg) > degree_cap) {
    std::ostringstream os;
    os << "degree " << deg << " exceeds root-finding cap " << degree_cap;
    throw Error(ErrorKind::NumericalFailure, os.str());
  }
  const double scale = p.coeffs().cwiseAbs().maxCoeff();
  std::size_t lo = 0;
  while (lo < static_cast<std::size_t>(deg) && std::abs(p[lo]) <= 1e-14 * scale) ++lo;
  rep.zero_roots = lo;
  for (std::size_t k = 0; k < lo; ++k) {
    rep.roots.push_back(0.0);
    rep.backward_error.push_back(0.0);
    rep.condition.push_back(1.0);
  }
  const std::size_t n = static_cast<std::size_t>(deg) - lo;
  if (n == 0) return rep;

  CoefSeries q(n + 1);
  for (std::size_t k = 0; k <= n; ++k) q[k] = p[k + lo];

  CMat companion = CMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const cplx lead = q[n];
  for (std::size_t i = 1; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -q[i] / lead;
  Eigen::ComplexEigenSolver<CMat> es(companion, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "companion eigenvalue solver did not converge");

  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cplx r = es.eigenvalues()[i];
    for (int it = 0; it < 4; ++it) {
      const cplx d = poly_derivative_at(q, r);
      if (std::abs(d) == 0.0) break;
      const cplx step = eval_poly(q.coeffs(), r) / d;
      if (!std::isfinite(std::abs(step))) break;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
    }
    const double absr = std::abs(r);
    const double denom = poly_abs_eval(q, absr);
    const double be = denom > 0 ? std::abs(eval_poly(q.coeffs(), r)) / denom : 0.0;
    const double dp = std::abs(poly_derivative_at(q, r));
    rep.roots.push_back(r);
    rep.backward_error.push_back(be);
    rep.condition.push_back(dp > 0 ? denom / (std::max(absr, 1e-300) * dp) : INFINITY);
  }
  rep.max_backward_error = *std::max_element(rep.backward_error.begin(), rep.backward_error.end());
  if (rep.max_backward_error > 1e-8) {
    std::ostringstream os;
    os << "root polishing left backward error " << rep.max_backward_error << " (degree " << deg << ", max condition "
       << *std::max_element(rep.condition.begin(), rep.condition.end()) << ")";
    throw Error(ErrorKind::NumericalFailure, os.str());
  }
  return rep;
}

// Rational function num/den kept as two ascending coefficient lists.
struct RationalFunction {
  CoefSeries num = CoefSeries{1.0};
  CoefSeries den = CoefSeries{1.0};

  cplx operator()(cplx z) const { return eval_poly(num.coeffs(), z) / eval_poly(den.coeffs(), z); }

  // Taylor expansion to n terms (requires den(0) != 0).
  CoefSeries series(std::size_t n) const { return series_divide(num, den, n); }

  bool is_polynomial() const { return poly_degree(den) == 0; }
};

}  // namespace hardylab
