#pragma once

// Two-component models: a column-inner pair Theta = [theta1; theta2], the
// space H(Theta) = (H2 + H2) minus Theta H2, the compressed shift S(Theta),
// the map Q(f1, f2) = theta1 f2 - theta2 f1 and the criteria built on them.

#include <bit>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "hardylab/model_ops.hpp"

namespace hardylab {

struct Theta {
  RationalFunction theta1;
  RationalFunction theta2;
  std::optional<InnerFunction> inner1;  // declared inner parts, if known
  std::optional<InnerFunction> inner2;
  std::string label;
};

// Theta with denominators cleared: theta_j = p_j / D.
// Common roots of p1, p2 outside the closed disk are divided out into g,
// so p_j = g * p_j' and theta_j = g p_j' / D.
struct ClearedTheta {
  CoefSeries p1, p2;  // reduced numerators p_j'
  CoefSeries D;
  CoefSeries g = CoefSeries{1.0};
  long d = 0;  // max(deg p1', deg p2')
};

namespace detail {

inline bool is_zero_poly(const CoefSeries& p) { return p.empty() || p.coeffs().cwiseAbs().maxCoeff() == 0.0; }

inline void check_denominator(const CoefSeries& den) {
  if (is_zero_poly(den)) throw Error(ErrorKind::Domain, "zero denominator");
  if (poly_degree(den) <= 0) return;
  for (const cplx& r : polynomial_roots(den).roots)
    if (!(std::abs(r) > 1.0 + 1e-9)) throw Error(ErrorKind::Domain, "denominator vanishes on the closed disk");
}

inline std::vector<cplx> outer_roots(const CoefSeries& p) {
  std::vector<cplx> out;
  if (is_zero_poly(p) || poly_degree(p) <= 0) return out;
  for (const cplx& r : polynomial_roots(p).roots)
    if (std::abs(r) > 1.0 + 1e-9) out.push_back(r);
  return out;
}

}  // namespace detail

inline ClearedTheta clear_theta(const Theta& th) {
  detail::check_denominator(th.theta1.den);
  detail::check_denominator(th.theta2.den);
  ClearedTheta c;
  CoefSeries p1 = poly_trim(series_multiply(th.theta1.num, th.theta2.den));
  CoefSeries p2 = poly_trim(series_multiply(th.theta2.num, th.theta1.den));
  c.D = poly_trim(series_multiply(th.theta1.den, th.theta2.den));
  const bool z1 = detail::is_zero_poly(p1), z2 = detail::is_zero_poly(p2);
  if (z1 && z2) throw Error(ErrorKind::Degenerate, "both components of Theta vanish");
  std::vector<cplx> common;
  if (z1 || z2) {
    common = detail::outer_roots(z1 ? p2 : p1);
  } else {
    const auto r1 = detail::outer_roots(p1), r2 = detail::outer_roots(p2);
    common = detail::multiset_intersection(r1, r2, [](cplx a, cplx b) { return std::abs(a - b) <= 1e-7 * std::max(1.0, std::abs(a)); });
  }
  for (const cplx& r : common) {
    if (!z1) p1 = poly_deflate(p1, r);
    if (!z2) p2 = poly_deflate(p2, r);
    c.g = series_multiply(c.g, CoefSeries{-r, 1.0});
  }
  c.p1 = z1 ? CoefSeries{0.0} : p1;
  c.p2 = z2 ? CoefSeries{0.0} : p2;
  c.d = std::max(std::max<long>(poly_degree(c.p1), 0), std::max<long>(poly_degree(c.p2), 0));
  return c;
}

struct InnerColumnReport {
  double max_deviation = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline InnerColumnReport check_inner_column(const Theta& th, std::size_t M = 512, double tol = 1e-10) {
  if (!is_power_of_two(M)) throw Error(ErrorKind::InvalidGrid, "M must be a power of two");
  InnerColumnReport r;
  r.tol = tol;
  for (std::size_t j = 0; j < M; ++j) {
    const cplx z = BoundarySamples::grid_point(j, M);
    const double dev = std::abs(std::norm(th.theta1(z)) + std::norm(th.theta2(z)) - 1.0);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

// Basis of H(Theta)_N in coordinates of poly_N + poly_N (block layout:
// the f1 coefficients, then the f2 coefficients).
//
// The first exact_dim columns span K_N = H(Theta) intersected with
// poly_N + poly_N, ordered by polynomial degree (grades). K_N is invariant
// under the backward shift, so compressions onto it are exact. The
// remaining d columns complete the span to the complement of the columns
// (p1 z^k, p2 z^k), k <= N - d - 1, and are not trusted.
struct ThetaBasis {
  Theta theta;
  ClearedTheta cleared;
  std::size_t N = 0;
  CMat vectors;
  std::vector<int> grades;
  std::size_t exact_dim = 0;

  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  CMat exact() const { return vectors.leftCols(static_cast<Eigen::Index>(exact_dim)); }
  std::size_t column_count() const { return N - static_cast<std::size_t>(cleared.d); }

  // Number of leading exact columns whose image under z stays inside poly_N.
  std::size_t trusted() const {
    std::size_t t = 0;
    while (t < exact_dim && grades[t] <= static_cast<int>(N) - 2) ++t;
    return t;
  }

  // Coordinates of an ambient pair (f1, f2) in the exact part.
  CVec coords(const CoefSeries& f1, const CoefSeries& f2) const {
    CVec x(2 * static_cast<Eigen::Index>(N));
    x.head(static_cast<Eigen::Index>(N)) = f1.resized(N).coeffs();
    x.tail(static_cast<Eigen::Index>(N)) = f2.resized(N).coeffs();
    return exact().adjoint() * x;
  }

  CVec ambient(const CVec& c) const { return exact() * c; }
};

namespace detail {

// Row k holds conj coefficients of (p1 z^k, p2 z^k) truncated to degree < N.
inline CMat theta_constraints(const ClearedTheta& c, std::size_t N, std::size_t rows) {
  const auto n = static_cast<Eigen::Index>(N);
  CMat C = CMat::Zero(static_cast<Eigen::Index>(rows), 2 * n);
  for (Eigen::Index k = 0; k < C.rows(); ++k) {
    for (Eigen::Index i = 0; k + i < n; ++i) {
      C(k, k + i) = std::conj(c.p1[static_cast<std::size_t>(i)]);
      C(k, n + k + i) = std::conj(c.p2[static_cast<std::size_t>(i)]);
    }
  }
  return C;
}

// Rotate an orthonormal basis of a backward-shift invariant subspace of
// poly_N + poly_N into degree-graded form, processing degrees top down.
inline std::vector<int> graded_rotation(CMat& V, std::size_t N, double tol = 1e-14) {
  const auto n = static_cast<Eigen::Index>(N);
  Eigen::Index j = V.cols();
  std::vector<int> grade(static_cast<std::size_t>(j), 0);
  for (Eigen::Index deg = n - 1; deg >= 0 && j > 0; --deg) {
    CMat Bh(j, 2);
    Bh.col(0) = V.row(deg).head(j).adjoint();
    Bh.col(1) = V.row(n + deg).head(j).adjoint();
    Eigen::ColPivHouseholderQR<CMat> qr(Bh);
    const auto& R = qr.matrixQR();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(2, j); ++i)
      if (std::abs(R(i, i)) > tol) ++r;
    if (r == 0) continue;
    CMat W = V.leftCols(j);
    W.applyOnTheRight(qr.householderQ());
    // columns r..j-1 are now free of degree deg; move the first r to the end
    CMat rotated(V.rows(), j);
    rotated.leftCols(j - r) = W.rightCols(j - r);
    rotated.rightCols(r) = W.leftCols(r);
    rotated.block(deg, 0, 1, j - r).setZero();
    rotated.block(n + deg, 0, 1, j - r).setZero();
    V.leftCols(j) = rotated;
    for (Eigen::Index c = j - r; c < j; ++c) grade[static_cast<std::size_t>(c)] = static_cast<int>(deg);
    j -= r;
  }
  if (j > 0) throw Error(ErrorKind::NumericalFailure, "graded rotation left unassigned columns");
  return grade;
}

}  // namespace detail

inline ThetaBasis theta_basis(const Theta& th, std::size_t N) {
  if (N < 32) throw Error(ErrorKind::InvalidOrder, "theta_basis needs N >= 32");
  const auto ic = check_inner_column(th, std::bit_ceil(std::max<std::size_t>(512, 2 * N)));
  if (!ic.pass) throw Error(ErrorKind::Degenerate, "Theta is not an inner column");
  ThetaBasis B;
  B.theta = th;
  B.cleared = clear_theta(th);
  B.N = N;
  const long d = B.cleared.d;
  if (static_cast<std::size_t>(d) + 8 > N) throw Error(ErrorKind::InvalidOrder, "N too small for the degree of Theta");
  const auto n2 = static_cast<Eigen::Index>(2 * N);

  const CMat C = detail::theta_constraints(B.cleared, N, N);
  Eigen::ColPivHouseholderQR<CMat> qr(C.adjoint());
  qr.setThreshold(1e-12);
  const Eigen::Index rank = qr.rank();
  CMat Q = qr.householderQ();
  CMat V = Q.rightCols(n2 - rank);
  B.grades = detail::graded_rotation(V, N);
  B.exact_dim = static_cast<std::size_t>(V.cols());

  // The column block k <= N-d-1 must have full rank N-d.
  const CMat Ctop = C.topRows(static_cast<Eigen::Index>(N) - d);
  Eigen::ColPivHouseholderQR<CMat> qt(Ctop.adjoint());
  qt.setThreshold(1e-12);
  if (qt.rank() != Ctop.rows()) throw Error(ErrorKind::Degenerate, "Theta columns are rank deficient");
  CMat Qt = qt.householderQ();
  CMat band = Qt.rightCols(n2 - Ctop.rows());
  band -= V * (V.adjoint() * band);
  const Eigen::Index extra = n2 - Ctop.rows() - V.cols();
  if (extra < 0) throw Error(ErrorKind::NumericalFailure, "H(Theta)_N dimension mismatch");
  Eigen::BDCSVD<CMat> bsvd(band, Eigen::ComputeThinU);
  const RVec& bs = bsvd.singularValues();
  // the band should be an exact extra-dimensional piece: singular values 1, then 0
  if ((extra > 0 && bs[extra - 1] < 0.5) || (extra < bs.size() && bs[extra] > 1e-8))
    throw Error(ErrorKind::NumericalFailure, "H(Theta)_N dimension mismatch");
  band = bsvd.matrixU().leftCols(extra);

  B.vectors.resize(n2, V.cols() + band.cols());
  B.vectors << V, band;
  return B;
}

namespace detail {

// z f on each component, truncated to degree < N.
inline CMat shift_pair(const CMat& X, std::size_t N) {
  const auto n = static_cast<Eigen::Index>(N);
  CMat Y = CMat::Zero(X.rows(), X.cols());
  Y.block(1, 0, n - 1, X.cols()) = X.topRows(n - 1);
  Y.block(n + 1, 0, n - 1, X.cols()) = X.block(n, 0, n - 1, X.cols());
  return Y;
}

inline CMat backshift_pair(const CMat& X, std::size_t N) {
  const auto n = static_cast<Eigen::Index>(N);
  CMat Y = CMat::Zero(X.rows(), X.cols());
  Y.topRows(n - 1) = X.block(1, 0, n - 1, X.cols());
  Y.block(n, 0, n - 1, X.cols()) = X.block(n + 1, 0, n - 1, X.cols());
  return Y;
}

inline CMat lower_toeplitz(const CoefSeries& u, Eigen::Index rows, Eigen::Index cols) {
  CMat T = CMat::Zero(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = j; i < rows; ++i) T(i, j) = u[static_cast<std::size_t>(i - j)];
  return T;
}

}  // namespace detail

// Compression of S + S to the exact part of the basis. Its adjoint is
// exactly the restriction of S* + S*.
inline OperatorMatrix s_theta(const ThetaBasis& B) {
  const CMat V = B.exact();
  CMat T = V.adjoint() * detail::shift_pair(V, B.N);
  return OperatorMatrix(std::move(T), {BasisKind::Theta, B.theta.label}, B.trusted(), B.grades);
}

// |(S* + S*) V - V (V^H (S* + S*) V)|: how far the exact part is from invariance.
inline double s_theta_invariance_residual(const ThetaBasis& B) {
  const CMat V = B.exact();
  const CMat W = detail::backshift_pair(V, B.N);
  return (W - V * (V.adjoint() * W)).norm();
}

// Smallest k with the tail of u beyond k below rel * |u|.
inline std::size_t symbol_margin(const CoefSeries& u, double rel = 1e-15) {
  const double cut = rel * u.norm();
  double tail2 = 0.0;
  for (long k = static_cast<long>(u.size()) - 1; k >= 0; --k) {
    tail2 += std::norm(u[static_cast<std::size_t>(k)]);
    if (std::sqrt(tail2) > cut) return static_cast<std::size_t>(k);
  }
  return 0;
}

// u(S(Theta)) compressed to the exact part; trusted on columns whose
// degree plus the effective degree of u stays below N.
inline OperatorMatrix theta_calculus(const CoefSeries& u, const ThetaBasis& B) {
  const CMat V = B.exact();
  const auto n = static_cast<Eigen::Index>(B.N);
  const CMat Tu = detail::lower_toeplitz(u, n, n);
  CMat W(V.rows(), V.cols());
  W.topRows(n) = Tu * V.topRows(n);
  W.bottomRows(n) = Tu * V.bottomRows(n);
  CMat M = V.adjoint() * W;
  const int top = static_cast<int>(B.N) - 1 - static_cast<int>(symbol_margin(u));
  std::size_t t = 0;
  while (t < B.exact_dim && B.grades[t] <= top) ++t;
  return OperatorMatrix(std::move(M), {BasisKind::Theta, B.theta.label}, t, B.grades);
}

// Taylor series of theta_j to n terms.
inline std::pair<CoefSeries, CoefSeries> theta_series(const Theta& th, std::size_t n) {
  return {th.theta1.series(n), th.theta2.series(n)};
}

// Q(f1 + f2) = theta1 f2 - theta2 f1, truncated to N + d coefficients.
inline CoefSeries quasiaffinity_Q(const Theta& th, const CoefSeries& f1, const CoefSeries& f2, std::size_t L) {
  const auto [t1, t2] = theta_series(th, L);
  return series_add(series_multiply(t1, f2, L), series_multiply(t2, f1, L), -1.0);
}

// Matrix of Q on the exact part of the basis (L = N + d rows).
inline CMat q_matrix(const ThetaBasis& B) {
  const auto n = static_cast<Eigen::Index>(B.N);
  const Eigen::Index L = n + B.cleared.d;
  const auto [t1, t2] = theta_series(B.theta, static_cast<std::size_t>(L));
  const CMat V = B.exact();
  return detail::lower_toeplitz(t1, L, n) * V.bottomRows(n) - detail::lower_toeplitz(t2, L, n) * V.topRows(n);
}

struct IntertwiningReport {
  std::size_t N = 0;
  double residual = 0.0;       // |Q S(Theta) - S Q| on trusted columns (spectral norm)
  double q_sigma_min = 0.0;    // smallest singular value of Q on the trusted columns
};

inline IntertwiningReport intertwining(const ThetaBasis& B) {
  const OperatorMatrix T = s_theta(B);
  const CMat Qm = q_matrix(B);
  const auto t = static_cast<Eigen::Index>(T.trust);
  const Eigen::Index L = Qm.rows();
  CMat SQ = CMat::Zero(L, t);
  SQ.bottomRows(L - 1) = Qm.topLeftCorner(L - 1, t);
  const CMat D = Qm * T.entries.leftCols(t) - SQ;
  IntertwiningReport r;
  r.N = B.N;
  r.residual = operator_norm(D);
  r.q_sigma_min = smallest_singular_value(Qm.leftCols(t));
  return r;
}

// Pointwise I - Theta Theta* on the boundary grid.
inline std::vector<Eigen::Matrix2cd> residual_projection(const Theta& th, std::size_t M) {
  if (!is_power_of_two(M)) throw Error(ErrorKind::InvalidGrid, "M must be a power of two");
  std::vector<Eigen::Matrix2cd> out(M);
  for (std::size_t j = 0; j < M; ++j) {
    const cplx z = BoundarySamples::grid_point(j, M);
    Eigen::Vector2cd t(th.theta1(z), th.theta2(z));
    out[j] = Eigen::Matrix2cd::Identity() - t * t.adjoint();
  }
  return out;
}

// ---------------------------------------------------------------- confluence

namespace detail {

// Inner part of a rational function with outer denominator; nullopt for 0.
inline std::optional<InnerFunction> rational_inner_part(const RationalFunction& f) {
  if (is_zero_poly(poly_trim(f.num)) || f.num.coeffs().cwiseAbs().maxCoeff() < 1e-300) return std::nullopt;
  if (poly_degree(f.num) <= 0) return InnerFunction{};
  return poly_inner_outer(f.num).inner;
}

// Divide a polynomial with zeros at the zeros of m by the Blaschke product m.
inline CoefSeries divide_by_blaschke(CoefSeries p, const BlaschkeProduct& m) {
  for (const cplx& a : m.zeros()) {
    p = poly_deflate(p, a);
    if (a != cplx{}) p = series_multiply(p, CoefSeries{-(a / std::abs(a)), (a / std::abs(a)) * std::conj(a)});
  }
  return series_scale(p, 1.0 / m.constant());
}

}  // namespace detail

struct ConfluenceReport {
  bool confluent = false;
  InnerFunction common;                      // gcd of the inner parts
  std::optional<double> witness_residual;    // |m(S(Theta)) h| / |h|
  std::optional<double> witness_leak;        // mass of h on untrusted coordinates
  std::vector<std::pair<std::string, double>> sigma_certificates;  // sigma_min of u(S(Theta)) on trusted columns
};

inline ConfluenceReport confluence_test(const Theta& th, std::size_t N = 128) {
  ConfluenceReport rep;
  const auto i1 = th.inner1 ? th.inner1 : detail::rational_inner_part(th.theta1);
  const auto i2 = th.inner2 ? th.inner2 : detail::rational_inner_part(th.theta2);
  if (!i1 && !i2) throw Error(ErrorKind::Degenerate, "both components of Theta vanish");
  rep.common = !i1 ? *i2 : !i2 ? *i1 : inner_gcd(*i1, *i2);
  rep.confluent = rep.common.is_constant();
  const ThetaBasis B = theta_basis(th, N);

  if (rep.confluent) {
    const std::vector<std::pair<std::string, CoefSeries>> symbols = {
        {"z", CoefSeries{0.0, 1.0}},
        {"b_0.5", InnerFunction::from_zeros({0.5}).series(N)},
        {"z*b_0.3", InnerFunction::from_zeros({0.0, 0.3}).series(N)},
    };
    for (const auto& [name, u] : symbols) {
      const OperatorMatrix U = theta_calculus(u, B);
      rep.sigma_certificates.emplace_back(name, smallest_singular_value(U.trusted_block()));
    }
    return rep;
  }

  if (!rep.common.is_finite_blaschke()) throw Error(ErrorKind::Degenerate, "witness construction needs a finite common factor");
  const auto phi = [&](const RationalFunction& t) {
    if (detail::is_zero_poly(poly_trim(t.num))) return CoefSeries(N);
    RationalFunction r{detail::divide_by_blaschke(poly_trim(t.num), rep.common.blaschke()), t.den};
    return r.series(N);
  };
  const CVec c = B.coords(phi(th.theta1), phi(th.theta2));
  const OperatorMatrix Mm = theta_calculus(rep.common.series(N), B);
  const auto t = static_cast<Eigen::Index>(Mm.trust);
  rep.witness_leak = c.tail(c.size() - t).norm() / c.norm();
  rep.witness_residual = (Mm.entries.leftCols(t) * c.head(t)).norm() / c.norm();
  return rep;
}

// ---------------------------------------------------------------- cyclicity and corona

enum class Cyclicity { Cyclic, NotCyclic, Indeterminate };

inline const char* to_string(Cyclicity c) {
  switch (c) {
    case Cyclicity::Cyclic: return "cyclic";
    case Cyclicity::NotCyclic: return "not-cyclic";
    case Cyclicity::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct CyclicityReport {
  Cyclicity verdict = Cyclicity::Indeterminate;
  CoefSeries numerator;            // p1 f2 - p2 f1 (cleared)
  std::vector<cplx> roots;
  double boundary_constant_dev = 0.0;  // max |theta1 f2 - theta2 f1 - q(1)|, informative
};

inline CyclicityReport cyclicity_test(const Theta& th, const CoefSeries& f1, const CoefSeries& f2) {
  const ClearedTheta c = clear_theta(th);
  CyclicityReport r;
  r.numerator = poly_trim(series_add(series_multiply(c.p1, f2), series_multiply(c.p2, f1), -1.0));
  if (poly_degree(r.numerator) < 0 || r.numerator.coeffs().cwiseAbs().maxCoeff() < 1e-14) {
    r.verdict = Cyclicity::NotCyclic;
    return r;
  }
  if (poly_degree(r.numerator) == 0) {
    r.verdict = Cyclicity::Cyclic;
    return r;
  }
  r.roots = polynomial_roots(r.numerator).roots;
  bool inside = false, band = false;
  for (const cplx& z : r.roots) {
    const double a = std::abs(z);
    if (a < 1.0 - kBoundaryBand) inside = true;
    else if (std::abs(a - 1.0) <= kBoundaryBand) band = true;
  }
  r.verdict = inside ? Cyclicity::NotCyclic : band ? Cyclicity::Indeterminate : Cyclicity::Cyclic;
  return r;
}

struct CoronaResult {
  bool feasible = false;
  int degree = -1;
  RationalFunction f1, f2;
  double boundary_residual = 0.0;   // max over the grid of |theta1 f2 - theta2 f1 - 1|
  std::vector<double> residual_by_degree;
};

// Polynomial Bezout search: p1' F2 - p2' F1 = D with deg F_j <= k, k = 0..d_max.
// Solutions are returned as f_j = F_j / g (g = common outer factor).
inline CoronaResult corona_similarity(const Theta& th, int d_max = 8, std::size_t M = 512, double tol = 1e-10) {
  const ClearedTheta c = clear_theta(th);
  CoronaResult out;
  for (int k = 0; k <= d_max; ++k) {
    const Eigen::Index rows = std::max<Eigen::Index>(c.d + k + 1, static_cast<Eigen::Index>(c.D.size()));
    CMat A = CMat::Zero(rows, 2 * (k + 1));
    for (int j = 0; j <= k; ++j) {
      for (std::size_t i = 0; i < c.p2.size(); ++i) A(j + static_cast<Eigen::Index>(i), j) = -c.p2[i];
      for (std::size_t i = 0; i < c.p1.size(); ++i) A(j + static_cast<Eigen::Index>(i), k + 1 + j) = c.p1[i];
    }
    CVec b = c.D.resized(static_cast<std::size_t>(rows)).coeffs();
    Eigen::BDCSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    const CVec x = svd.solve(b);
    const double res = (A * x - b).norm() / b.norm();
    out.residual_by_degree.push_back(res);
    if (res > tol) continue;
    RationalFunction f1{CoefSeries(CVec(x.head(k + 1))), c.g};
    RationalFunction f2{CoefSeries(CVec(x.tail(k + 1))), c.g};
    double worst = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      const cplx z = BoundarySamples::grid_point(j, M);
      worst = std::max(worst, std::abs(th.theta1(z) * f2(z) - th.theta2(z) * f1(z) - 1.0));
    }
    if (worst <= tol) {
      out.feasible = true;
      out.degree = k;
      out.f1 = f1;
      out.f2 = f2;
      out.boundary_residual = worst;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------- ratio field

struct RatioSample {
  cplx lambda;
  cplx ratio;
  bool pole = false;
};

struct RatioTable {
  std::vector<RatioSample> samples;
  std::vector<std::pair<double, double>> mean_square_by_radius;  // (radius, mean |r|^2 over non-pole points)
};

// r(lambda) = <h, f(conj lambda)> / <f(0), f(conj lambda)> on circles.
// The mean squares are a growth diagnostic only; they certify nothing.
inline RatioTable ratio_field_probe(const EigenvectorField& F, const CVec& h, const std::vector<double>& radii,
                                    std::size_t points) {
  RatioTable t;
  const CVec& f0 = F.f0();
  for (double rho : radii) {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t j = 0; j < points; ++j) {
      const cplx lam = std::polar(rho, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(points));
      const CVec f = F(std::conj(lam), false);
      const cplx num = f.dot(h);
      const cplx den = f.dot(f0);
      RatioSample s{lam, 0.0, false};
      if (std::abs(den) < 1e-12 * f.norm() * f0.norm()) {
        s.pole = true;
      } else {
        s.ratio = num / den;
        acc += std::norm(s.ratio);
        ++cnt;
      }
      t.samples.push_back(s);
    }
    t.mean_square_by_radius.emplace_back(rho, cnt ? acc / static_cast<double>(cnt) : INFINITY);
  }
  return t;
}

}  // namespace hardylab
