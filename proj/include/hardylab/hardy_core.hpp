#pragma once

// Truncated analytic functions on the disk: Taylor coefficient series,
// boundary samples on the uniform circle grid, and the H^2 plumbing
// (Riesz projection, inner products, Cauchy kernels).

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "hardylab/common.hpp"

namespace hardylab {

// Taylor coefficients c_0..c_{N-1} of an analytic function on the disk.
class CoefSeries {
 public:
  CoefSeries() = default;
  explicit CoefSeries(std::size_t n) : coeffs_(CVec::Zero(static_cast<Eigen::Index>(n))) {}
  explicit CoefSeries(CVec c, std::string label = {}) : coeffs_(std::move(c)), label_(std::move(label)) {}
  CoefSeries(std::initializer_list<cplx> c) : coeffs_(static_cast<Eigen::Index>(c.size())) {
    Eigen::Index k = 0;
    for (const auto& v : c) coeffs_[k++] = v;
  }

  static CoefSeries constant(cplx value, std::size_t n = 1) {
    CoefSeries s(std::max<std::size_t>(n, 1));
    s.coeffs_[0] = value;
    return s;
  }
  static CoefSeries monomial(std::size_t k, std::size_t n) {
    CoefSeries s(std::max(n, k + 1));
    s.coeffs_[static_cast<Eigen::Index>(k)] = 1.0;
    return s;
  }

  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  bool empty() const { return coeffs_.size() == 0; }
  cplx operator[](std::size_t k) const { return k < size() ? coeffs_[static_cast<Eigen::Index>(k)] : cplx{}; }
  cplx& operator[](std::size_t k) { return coeffs_[static_cast<Eigen::Index>(k)]; }

  const CVec& coeffs() const { return coeffs_; }
  CVec& coeffs() { return coeffs_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  double norm() const { return coeffs_.norm(); }

  // Zero-padded or truncated copy of length n.
  CoefSeries resized(std::size_t n) const {
    CoefSeries out(n);
    const auto m = static_cast<Eigen::Index>(std::min(n, size()));
    out.coeffs_.head(m) = coeffs_.head(m);
    out.label_ = label_;
    return out;
  }

  // Index of the highest coefficient above rel_tol * norm, or -1 for the zero series.
  long degree(double rel_tol = 0.0) const {
    const double cut = rel_tol * norm();
    for (long k = static_cast<long>(size()) - 1; k >= 0; --k)
      if (std::abs(coeffs_[k]) > cut) return k;
    return -1;
  }

 private:
  CVec coeffs_;
  std::string label_;
};

// Values on the grid zeta_j = exp(2 pi i j / M).
struct BoundarySamples {
  CVec values;

  std::size_t M() const { return static_cast<std::size_t>(values.size()); }
  double mean_square() const { return values.squaredNorm() / static_cast<double>(values.size()); }
  double sup_norm() const { return values.cwiseAbs().maxCoeff(); }

  static cplx grid_point(std::size_t j, std::size_t M) {
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(M));
  }

  template <class F>
  static BoundarySamples from_function(std::size_t M, F&& fn) {
    if (!is_power_of_two(M)) throw Error(ErrorKind::InvalidGrid, "grid size must be a power of two");
    BoundarySamples s{CVec(static_cast<Eigen::Index>(M))};
    for (std::size_t j = 0; j < M; ++j) s.values[static_cast<Eigen::Index>(j)] = fn(grid_point(j, M));
    return s;
  }
};

class DiskPoint {
 public:
  explicit DiskPoint(cplx lambda) : lambda_(lambda) {
    if (!(std::abs(lambda) < 1.0)) throw Error(ErrorKind::Domain, "disk point must satisfy |lambda| < 1");
  }
  cplx value() const { return lambda_; }

 private:
  cplx lambda_;
};

namespace detail {

inline std::vector<cplx> to_std(const CVec& v) { return {v.data(), v.data() + v.size()}; }

inline CVec from_std(const std::vector<cplx>& v) {
  return Eigen::Map<const CVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

inline BoundarySamples to_boundary(const CoefSeries& c, std::size_t M) {
  if (!is_power_of_two(M)) throw Error(ErrorKind::InvalidGrid, "M must be a power of two");
  if (M < c.size()) throw Error(ErrorKind::InvalidGrid, "M must be at least the series length");
  std::vector<cplx> spec(M, cplx{}), out;
  for (std::size_t k = 0; k < c.size(); ++k) spec[k] = c[k];
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(out, spec);
  return BoundarySamples{detail::from_std(out)};
}

// Riesz projection: keeps frequencies 0..N-1 of the sampled function.
inline CoefSeries to_coef(const BoundarySamples& s, std::size_t N) {
  const std::size_t M = s.M();
  if (!is_power_of_two(M)) throw Error(ErrorKind::InvalidGrid, "M must be a power of two");
  if (N > M) throw Error(ErrorKind::InvalidOrder, "N must not exceed M");
  std::vector<cplx> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, detail::to_std(s.values));
  CoefSeries c(N);
  for (std::size_t k = 0; k < N; ++k) c[k] = out[k] / static_cast<double>(M);
  return c;
}

// <f, g> = sum f_k conj(g_k); the shorter series is zero padded.
inline cplx h2_inner(const CoefSeries& f, const CoefSeries& g) {
  const auto n = static_cast<Eigen::Index>(std::min(f.size(), g.size()));
  return g.coeffs().head(n).dot(f.coeffs().head(n));
}

// k_a(z) = 1/(1 - a z), coefficients a^k. S* k_a = a k_a.
inline CoefSeries cauchy_kernel(cplx a, std::size_t N) {
  if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::Domain, "cauchy_kernel requires |a| < 1");
  CoefSeries k(N);
  cplx p = 1.0;
  for (std::size_t j = 0; j < N; ++j) {
    k[j] = p;
    p *= a;
  }
  return k;
}

inline cplx eval_poly(const CVec& c, cplx z) {
  cplx acc = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * z + c[k];
  return acc;
}

inline cplx eval_disk(const CoefSeries& c, const DiskPoint& lambda) { return eval_poly(c.coeffs(), lambda.value()); }

// ---- series arithmetic (truncated to a given length) ----

inline CoefSeries series_add(const CoefSeries& a, const CoefSeries& b, cplx beta = 1.0) {
  const std::size_t n = std::max(a.size(), b.size());
  CoefSeries out = a.resized(n);
  out.coeffs() += beta * b.resized(n).coeffs();
  return out;
}

inline CoefSeries series_scale(const CoefSeries& a, cplx s) {
  CoefSeries out = a;
  out.coeffs() *= s;
  return out;
}

// Cauchy product truncated to n coefficients.
inline CoefSeries series_multiply(const CoefSeries& a, const CoefSeries& b, std::size_t n) {
  CoefSeries out(n);
  for (std::size_t i = 0; i < std::min(a.size(), n); ++i) {
    const cplx ai = a[i];
    if (ai == cplx{}) continue;
    const std::size_t lim = std::min(b.size(), n - i);
    for (std::size_t j = 0; j < lim; ++j) out[i + j] += ai * b[j];
  }
  return out;
}

// Full polynomial product (length a.size() + b.size() - 1).
inline CoefSeries series_multiply(const CoefSeries& a, const CoefSeries& b) {
  if (a.empty() || b.empty()) return CoefSeries{};
  return series_multiply(a, b, a.size() + b.size() - 1);
}

// Power series quotient num/den to n terms; den(0) must be nonzero.
inline CoefSeries series_divide(const CoefSeries& num, const CoefSeries& den, std::size_t n) {
  if (den.empty() || std::abs(den[0]) == 0.0) throw Error(ErrorKind::Degenerate, "series_divide: den(0) = 0");
  CoefSeries q(n);
  const cplx d0 = den[0];
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = num[k];
    const std::size_t lim = std::min(k, den.size() - 1);
    for (std::size_t j = 1; j <= lim; ++j) acc -= den[j] * q[k - j];
    q[k] = acc / d0;
  }
  return q;
}

// exp of a power series via n O_n = sum_{k=1}^n k g_k O_{n-k}.
inline CoefSeries series_exp(const CoefSeries& g, std::size_t n) {
  CoefSeries out(n);
  if (n == 0) return out;
  out[0] = std::exp(g[0]);
  std::vector<cplx> kg(n);
  for (std::size_t k = 1; k < n; ++k) kg[k] = static_cast<double>(k) * g[k];
  for (std::size_t m = 1; m < n; ++m) {
    cplx acc = 0.0;
    const std::size_t lim = std::min(m, g.size() - 1);
    for (std::size_t k = 1; k <= lim; ++k) acc += kg[k] * out[m - k];
    out[m] = acc / static_cast<double>(m);
  }
  return out;
}

// Multiplication by z^j keeping length n.
inline CoefSeries series_shift_by(const CoefSeries& a, std::size_t j, std::size_t n) {
  CoefSeries out(n);
  for (std::size_t k = 0; k + j < n && k < a.size(); ++k) out[k + j] = a[k];
  return out;
}

// Multiplication by z (the unilateral shift) keeping length n.
inline CoefSeries series_shift(const CoefSeries& a, std::size_t n) { return series_shift_by(a, 1, n); }

}  // namespace hardylab
