#pragma once

// Matrix models of S, T_u, S(m) and u(S(m)); kernel and index probes; the
// quotient solver h/h0; the left inverse L and the eigenvector field f(lambda).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "hardylab/inner_outer.hpp"
#include "hardylab/linalg.hpp"
#include "hardylab/operator_matrix.hpp"

namespace hardylab {

// ---------------------------------------------------------------- H(m)

struct ModelBasis {
  InnerFunction m;
  CMat vectors;  // N x deg(m), orthonormal columns (Taylor coefficients)

  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  std::size_t N() const { return static_cast<std::size_t>(vectors.rows()); }
  CoefSeries vector(std::size_t k) const { return CoefSeries(vectors.col(static_cast<Eigen::Index>(k))); }
};

// Orthonormal basis of H(m) for a finite Blaschke product m.
//
// Uses the rational basis e_k = sqrt(1-|a_k|^2)/(1 - conj(a_k) z) * prod_{j<k} b_{a_j},
// which spans the kernels at the zeros (with derivatives at repeated zeros).
inline ModelBasis model_basis(const InnerFunction& m, std::size_t N) {
  if (!m.is_finite_blaschke()) throw Error(ErrorKind::Degenerate, "model_basis needs a finite Blaschke product");
  const auto& zeros = m.blaschke().zeros();
  const std::size_t d = zeros.size();
  if (d == 0) throw Error(ErrorKind::Degenerate, "model_basis needs deg(m) >= 1");
  if (N < d + 8) throw Error(ErrorKind::InvalidOrder, "model_basis needs N >= deg(m) + 8");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double gap = std::abs(zeros[i] - zeros[j]);
      if (gap > 0.0 && gap < 1e-8) throw Error(ErrorKind::Conditioning, "Blaschke zeros closer than 1e-8");
    }

  const auto n = static_cast<Eigen::Index>(N);
  CMat V(n, static_cast<Eigen::Index>(d));
  CVec prefix = CVec::Zero(n);
  prefix[0] = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    const cplx a = zeros[k];
    CVec e = prefix * std::sqrt(1.0 - std::norm(a));
    detail::div_linear(e, std::conj(a));
    V.col(static_cast<Eigen::Index>(k)) = e;
    if (a == cplx{}) {
      for (Eigen::Index i = n - 1; i >= 1; --i) prefix[i] = prefix[i - 1];
      prefix[0] = 0.0;
    } else {
      detail::mul_linear(prefix, a, std::abs(a) / a);
      detail::div_linear(prefix, std::conj(a));
    }
  }
  const double tail = V.bottomRows(std::min<Eigen::Index>(8, n)).norm();
  if (tail > 1e-13) {
    std::ostringstream os;
    os << "model basis not resolved at N=" << N << " (tail " << tail << ")";
    throw Error(ErrorKind::TrustViolation, os.str());
  }
  return ModelBasis{m, std::move(V)};
}

// Matrix of P_{H(m)} A |H(m) in the basis B (A acts on Taylor coefficients).
inline OperatorMatrix compress(const OperatorMatrix& A, const ModelBasis& B) {
  if (A.basis.kind != BasisKind::Monomial) throw Error(ErrorKind::Degenerate, "compress expects a monomial-basis operator");
  const Eigen::Index n = B.vectors.rows();
  const Eigen::Index t = static_cast<Eigen::Index>(A.trust);
  if (t < n && B.vectors.bottomRows(n - t).norm() > 1e-13)
    throw Error(ErrorKind::TrustViolation, "model basis extends beyond the trusted columns");
  CMat Vin = CMat::Zero(A.cols(), B.vectors.cols());
  const Eigen::Index ci = std::min(n, A.cols());
  Vin.topRows(ci) = B.vectors.topRows(ci);
  const CMat W = A.entries * Vin;
  const Eigen::Index co = std::min(n, A.rows());
  CMat out = B.vectors.topRows(co).adjoint() * W.topRows(co);
  return OperatorMatrix(std::move(out), {BasisKind::Model, ""}, B.dim());
}

// u(S(m)) = P_{H(m)} T_u |H(m) in the basis B.
inline OperatorMatrix functional_calculus(const CoefSeries& u, const ModelBasis& B) {
  const std::size_t N = B.N();
  CMat W(B.vectors.rows(), B.vectors.cols());
  for (Eigen::Index k = 0; k < B.vectors.cols(); ++k)
    W.col(k) = series_multiply(u, CoefSeries(CVec(B.vectors.col(k))), N).coeffs();
  CMat out = B.vectors.adjoint() * W;
  return OperatorMatrix(std::move(out), {BasisKind::Model, ""}, B.dim());
}

// ---------------------------------------------------------------- kernels and index

inline KernelResult numeric_kernel(const OperatorMatrix& A, double tol = kDefaultKernelTol) {
  return numeric_kernel(A.entries, tol);
}

// Same as numeric_kernel but an ambiguous gap is an error, not a flag.
inline KernelResult require_kernel(const CMat& A, double tol = kDefaultKernelTol) {
  KernelResult k = numeric_kernel(A, tol);
  if (!k.determinate) {
    std::ostringstream os;
    os << "no singular-value gap: smallest kept " << k.smallest_kept << " vs threshold " << k.threshold;
    throw Error(ErrorKind::IndeterminateKernel, os.str());
  }
  return k;
}

struct RankInfo {
  std::size_t rank = 0;
  bool determinate = true;
  double sigma_min_kept = 0.0;
  double sigma_max = 0.0;
};

inline RankInfo numeric_rank(const CMat& A, double tol = kDefaultKernelTol, double gap = kDefaultGapFactor) {
  RankInfo r;
  if (A.size() == 0) return r;
  Eigen::BDCSVD<CMat> svd(A);
  const RVec& s = svd.singularValues();
  r.sigma_max = s[0];
  const double th = tol * s[0];
  while (r.rank < static_cast<std::size_t>(s.size()) && s[static_cast<Eigen::Index>(r.rank)] >= th && s[static_cast<Eigen::Index>(r.rank)] > 0)
    ++r.rank;
  r.sigma_min_kept = r.rank ? s[static_cast<Eigen::Index>(r.rank - 1)] : 0.0;
  if (r.rank && r.sigma_min_kept < gap * th) r.determinate = false;
  return r;
}

struct FredholmRung {
  std::size_t N = 0;
  std::size_t kernel = 0;
  std::size_t cokernel = 0;
  long index = 0;
  bool determinate = true;
  double sigma_min = 0.0;  // smallest singular value of the trusted block
};

struct FredholmReport {
  std::vector<FredholmRung> rungs;
  bool stable = false;
  std::optional<long> index;
  std::optional<std::size_t> kernel;
  std::optional<std::size_t> cokernel;
};

// Kernel/cokernel of the trusted block of a single truncation.
inline FredholmRung fredholm_rung(const OperatorMatrix& A, double tol = kDefaultKernelTol) {
  const CMat B = A.trusted_block();
  FredholmRung r;
  r.N = A.in_order;
  const RankInfo ri = numeric_rank(B, tol);
  r.kernel = static_cast<std::size_t>(B.cols()) - ri.rank;
  r.cokernel = static_cast<std::size_t>(B.rows()) - ri.rank;
  r.index = static_cast<long>(r.kernel) - static_cast<long>(r.cokernel);
  r.determinate = ri.determinate;
  r.sigma_min = ri.rank == static_cast<std::size_t>(B.cols()) ? ri.sigma_min_kept : 0.0;
  return r;
}

inline FredholmReport fredholm_probe(const std::function<OperatorMatrix(std::size_t)>& family,
                                     const std::vector<std::size_t>& ladder, double tol = kDefaultKernelTol) {
  FredholmReport rep;
  for (std::size_t N : ladder) {
    FredholmRung r = fredholm_rung(family(N), tol);
    r.N = N;
    rep.rungs.push_back(r);
  }
  rep.stable = !rep.rungs.empty();
  for (const auto& r : rep.rungs)
    if (!r.determinate || r.kernel != rep.rungs.front().kernel || r.cokernel != rep.rungs.front().cokernel) rep.stable = false;
  if (rep.stable) {
    rep.index = rep.rungs.front().index;
    rep.kernel = rep.rungs.front().kernel;
    rep.cokernel = rep.rungs.front().cokernel;
  }
  return rep;
}

// lambda I - T with the same trust region (T square).
inline OperatorMatrix shifted(const OperatorMatrix& T, cplx lambda) {
  CMat A = -T.entries;
  A.diagonal().array() += lambda;
  return OperatorMatrix(std::move(A), T.basis, T.trust, T.grades);
}

// ---------------------------------------------------------------- quotients

struct QuotientPair {
  CoefSeries u;
  CoefSeries v;
  double residual = 0.0;
  int degree = -1;
  bool found = false;
  double leak = 0.0;  // norm carried through untrusted columns while building Krylov data
};

namespace detail {

struct KrylovData {
  CMat A;  // [T^k h0 | -T^k h], k = 0..d
  double leak = 0.0;
};

inline KrylovData krylov_pair(const OperatorMatrix& T, const CVec& h, const CVec& h0, int d) {
  KrylovData kd;
  kd.A.resize(T.rows(), 2 * (d + 1));
  CVec a = h0, b = h;
  for (int k = 0; k <= d; ++k) {
    kd.A.col(k) = a;
    kd.A.col(d + 1 + k) = -b;
    if (k < d) {
      a = T.apply(a, &kd.leak);
      b = T.apply(b, &kd.leak);
    }
  }
  return kd;
}

inline QuotientPair pair_from_vector(const CVec& x, int d) {
  QuotientPair q;
  q.degree = d;
  q.u = CoefSeries(CVec(x.head(d + 1)));
  q.v = CoefSeries(CVec(x.tail(d + 1)));
  const double vn = q.v.norm();
  for (std::size_t k = 0; k < q.v.size(); ++k) {
    if (std::abs(q.v[k]) > 1e-10 * vn) {
      const cplx ph = std::conj(q.v[k]) / std::abs(q.v[k]);
      q.u.coeffs() *= ph;
      q.v.coeffs() *= ph;
      break;
    }
  }
  return q;
}

}  // namespace detail

// All null pairs (u, v) of fixed degree d with ||(u,v)|| = 1, v != 0.
inline std::vector<QuotientPair> quotient_null_pairs(const OperatorMatrix& T, const CVec& h, const CVec& h0, int d,
                                                     double tol = 1e-10) {
  if (h0.norm() == 0.0) throw Error(ErrorKind::Degenerate, "quotient_solver: h0 = 0");
  const auto kd = detail::krylov_pair(T, h, h0, d);
  const double scale = std::max(h.norm(), h0.norm());
  Eigen::BDCSVD<CMat> svd(kd.A, Eigen::ComputeFullV);
  const Eigen::Index n = kd.A.cols();
  RVec s = RVec::Zero(n);
  s.head(svd.singularValues().size()) = svd.singularValues();
  std::vector<QuotientPair> out;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (s[j] > tol * scale) continue;
    const CVec x = svd.matrixV().col(j);
    if (x.tail(d + 1).norm() < 1e-8) continue;
    QuotientPair q = detail::pair_from_vector(x, d);
    q.residual = (kd.A * x).norm();
    q.found = true;
    q.leak = kd.leak;
    out.push_back(q);
  }
  return out;
}

// Minimal-degree (u, v) with v(T)h = u(T)h0, searching degrees 0..d.
// A pair with residual above tol * max(|h|,|h0|) at every degree is
// reported with found = false (the best candidate at degree d is kept).
inline QuotientPair quotient_solver(const OperatorMatrix& T, const CVec& h, const CVec& h0, int d, double tol = 1e-10) {
  if (h0.norm() == 0.0) throw Error(ErrorKind::Degenerate, "quotient_solver: h0 = 0");
  const double scale = std::max(h.norm(), h0.norm());
  QuotientPair best;
  for (int k = 0; k <= d; ++k) {
    const auto kd = detail::krylov_pair(T, h, h0, k);
    Eigen::BDCSVD<CMat> svd(kd.A, Eigen::ComputeFullV);
    const Eigen::Index n = kd.A.cols();
    RVec s = RVec::Zero(n);
    s.head(svd.singularValues().size()) = svd.singularValues();
    // Among (near-)null vectors prefer the largest v(0), then the largest v-part.
    Eigen::Index nnull = 0;
    while (nnull < n && s[n - 1 - nnull] <= tol * scale) ++nnull;
    CVec x;
    if (nnull > 1) {
      const CMat Nb = svd.matrixV().rightCols(nnull);
      const CVec v0 = Nb.row(k + 1).adjoint();
      if (v0.norm() > 1e-8) {
        x = Nb * v0;
      } else {
        Eigen::JacobiSVD<CMat> sv(Nb.bottomRows(k + 1), Eigen::ComputeFullV);
        x = Nb * sv.matrixV().col(0);
      }
      x.normalize();
    } else {
      x = svd.matrixV().col(n - 1);
    }
    QuotientPair q = detail::pair_from_vector(x, k);
    q.residual = (kd.A * x).norm();
    q.leak = kd.leak;
    q.found = q.residual <= tol * scale && q.v.norm() > 1e-8;
    best = q;
    if (q.found) break;
  }
  return best;
}

struct Ord0 {
  bool infinite = false;
  long value = 0;
};

inline long vanishing_order(const CoefSeries& p, double rel = 1e-10) {
  const double cut = rel * p.norm();
  for (std::size_t k = 0; k < p.size(); ++k)
    if (std::abs(p[k]) > cut) return static_cast<long>(k);
  return -1;
}

inline Ord0 ord0(const QuotientPair& q) {
  if (q.u.norm() == 0.0 || vanishing_order(q.u) < 0) return {true, 0};
  return {false, vanishing_order(q.u) - vanishing_order(q.v)};
}

// |v' u - v u'| for two quotient representatives.
inline double cross_identity(const QuotientPair& a, const QuotientPair& b) {
  return series_add(series_multiply(b.v, a.u), series_multiply(a.v, b.u), -1.0).norm();
}

// ---------------------------------------------------------------- L and f(lambda)

struct LeftInverse {
  OperatorMatrix L;    // trust x rows, L T = I on the trusted columns
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double norm() const { return 1.0 / sigma_min; }

  // L* as a square matrix on the input coordinates (zero on untrusted ones).
  CMat adjoint_padded(Eigen::Index cols) const {
    CMat P = CMat::Zero(L.entries.cols(), cols);
    P.leftCols(L.entries.rows()) = L.entries.adjoint();
    return P;
  }
};

inline LeftInverse left_inverse(const OperatorMatrix& T) {
  const CMat Tr = T.trusted_block();
  if (Tr.cols() == 0) throw Error(ErrorKind::NotLeftInvertible, "no trusted columns");
  Eigen::BDCSVD<CMat> svd(Tr, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  LeftInverse out;
  out.sigma_max = s[0];
  out.sigma_min = s[s.size() - 1];
  if (Tr.rows() < Tr.cols() || !(out.sigma_min > 1e-4 * out.sigma_max)) {
    std::ostringstream os;
    os << "T*T numerically singular on the trusted block (sigma ratio " << out.sigma_min / out.sigma_max << ")";
    throw Error(ErrorKind::NotLeftInvertible, os.str());
  }
  CMat L = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  out.L = OperatorMatrix(std::move(L), T.basis, static_cast<std::size_t>(Tr.rows()));
  return out;
}

// f(lambda) = (I - lambda L*)^{-1} f0 near the origin, continued by
// eigenvectors of T* beyond the resolvent disk.
class EigenvectorField {
 public:
  EigenvectorField(OperatorMatrix T, CVec f0) : T_(std::move(T)), f0_(std::move(f0)), li_(left_inverse(T_)) {
    if (!T_.square()) throw Error(ErrorKind::Degenerate, "eigenvector_field needs a square operator");
    if (std::abs(f0_.norm() - 1.0) > 1e-10) throw Error(ErrorKind::Domain, "f0 must be a unit vector");
    if ((T_.entries.adjoint() * f0_).norm() > 1e-8) throw Error(ErrorKind::Domain, "f0 is not in ker T*");
    Lstar_ = li_.adjoint_padded(T_.cols());
    normL_ = li_.norm();
  }

  double norm_L() const { return normL_; }
  const LeftInverse& left() const { return li_; }
  const OperatorMatrix& op() const { return T_; }
  const CVec& f0() const { return f0_; }
  bool in_resolvent_disk(cplx lambda) const { return std::abs(lambda) * normL_ < 0.95; }

  CVec resolvent(cplx lambda) const {
    const Eigen::Index n = T_.cols();
    CMat A = CMat::Identity(n, n) - lambda * Lstar_;
    return A.partialPivLu().solve(f0_);
  }

  // Outside the resolvent disk the vector is the unit kernel vector of
  // (lambda I - T*), phase-continued along the ray from the disk and scaled
  // to the norm of the field at the last resolvent point.
  CVec operator()(cplx lambda, bool check_multiplicity = true) const {
    if (in_resolvent_disk(lambda)) return resolvent(lambda);
    const CMat Ts = T_.entries.adjoint();
    const cplx start = lambda * (0.9 / (std::abs(lambda) * normL_));
    CVec prev = resolvent(start);
    const double scale = prev.norm();
    prev /= scale;
    constexpr int kSteps = 8;
    for (int i = 1; i <= kSteps; ++i) {
      const cplx mu = start + (lambda - start) * (static_cast<double>(i) / kSteps);
      CMat A = -Ts;
      A.diagonal().array() += mu;
      CVec x = A.partialPivLu().solve(prev);
      x = A.partialPivLu().solve(x / x.norm());
      x.normalize();
      const cplx ph = prev.dot(x);
      if (std::abs(ph) > 0) x *= std::conj(ph) / std::abs(ph);
      prev = x;
    }
    if (check_multiplicity) {
      CMat A = -Ts;
      A.diagonal().array() += lambda;
      const KernelResult k = numeric_kernel(A);
      if (k.dim() != 1 || !k.determinate) {
        std::ostringstream os;
        os << "ker(lambda I - T*) has numerical dimension " << k.dim() << (k.determinate ? "" : " (no gap)");
        throw Error(ErrorKind::Multiplicity, os.str());
      }
      CVec x = k.basis.col(0);
      const cplx ph = prev.dot(x);
      if (std::abs(ph) > 0) x *= std::conj(ph) / std::abs(ph);
      prev = x;
    }
    return prev * scale;
  }

  // |T* f - lambda f| / |f|
  double eigen_residual(const CVec& f, cplx lambda) const {
    return (T_.entries.adjoint() * f - lambda * f).norm() / f.norm();
  }

 private:
  OperatorMatrix T_;
  CVec f0_;
  LeftInverse li_;
  CMat Lstar_;
  double normL_ = 0.0;
};

inline CVec eigenvector_field(const OperatorMatrix& T, const CVec& f0, cplx lambda) {
  return EigenvectorField(T, f0)(lambda);
}

// [<T^n f0, L*^m f0>]_{n,m < K}
inline CMat biorthogonality_matrix(const EigenvectorField& F, int K) {
  const auto& T = F.op().entries;
  const CMat Ls = F.left().adjoint_padded(T.cols());
  std::vector<CVec> a, b;
  CVec x = F.f0(), y = F.f0();
  for (int k = 0; k < K; ++k) {
    a.push_back(x);
    b.push_back(y);
    x = T * x;
    y = Ls * y;
  }
  CMat G(K, K);
  for (int n = 0; n < K; ++n)
    for (int m = 0; m < K; ++m) G(n, m) = b[static_cast<std::size_t>(m)].dot(a[static_cast<std::size_t>(n)]);
  return G;
}

}  // namespace hardylab
