#pragma once

// Inner and outer functions: finite Blaschke products, discrete singular
// inner factors, outer functions built from a boundary modulus, and
// inner-outer splitting of polynomials.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hardylab/hardy_core.hpp"
#include "hardylab/polynomial.hpp"

namespace hardylab {

inline constexpr double kPairTol = 1e-9;
inline constexpr double kBoundaryBand = 1e-3;

namespace detail {

// s <- s * c (a - z), truncated to s.size().
inline void mul_linear(CVec& s, cplx a, cplx c) {
  for (Eigen::Index k = s.size() - 1; k >= 0; --k) s[k] = c * (a * s[k] - (k > 0 ? s[k - 1] : cplx{}));
}

// s <- s / (1 - b z) as a power series.
inline void div_linear(CVec& s, cplx b) {
  for (Eigen::Index k = 1; k < s.size(); ++k) s[k] += b * s[k - 1];
}

}  // namespace detail

class BlaschkeProduct {
 public:
  BlaschkeProduct() = default;
  explicit BlaschkeProduct(std::vector<cplx> zeros, cplx constant = 1.0)
      : zeros_(std::move(zeros)), constant_(constant) {
    for (const cplx& a : zeros_)
      if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::Domain, "Blaschke zeros must lie in the open disk");
    if (std::abs(std::abs(constant_) - 1.0) > 1e-12) throw Error(ErrorKind::Domain, "Blaschke constant must be unimodular");
  }

  const std::vector<cplx>& zeros() const { return zeros_; }
  cplx constant() const { return constant_; }
  std::size_t degree() const { return zeros_.size(); }

  // Single normalized factor (|a|/a)(a - z)/(1 - conj(a) z), or z at a = 0.
  static cplx factor(cplx a, cplx z) {
    if (a == cplx{}) return z;
    return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
  }

  cplx operator()(cplx z) const {
    cplx v = constant_;
    for (const cplx& a : zeros_) v *= factor(a, z);
    return v;
  }

  CoefSeries series(std::size_t n) const {
    CVec s = CVec::Zero(static_cast<Eigen::Index>(n));
    if (n == 0) return CoefSeries(s);
    s[0] = constant_;
    for (const cplx& a : zeros_) {
      if (a == cplx{}) {
        for (Eigen::Index k = s.size() - 1; k >= 1; --k) s[k] = s[k - 1];
        s[0] = 0.0;
        continue;
      }
      detail::mul_linear(s, a, std::abs(a) / a);
      detail::div_linear(s, std::conj(a));
    }
    return CoefSeries(s);
  }

 private:
  std::vector<cplx> zeros_;
  cplx constant_ = 1.0;
};

struct SingularAtom {
  cplx zeta;
  double mass;
};

class SingularInner {
 public:
  SingularInner() = default;
  explicit SingularInner(std::vector<SingularAtom> atoms) : atoms_(std::move(atoms)) {
    for (const auto& at : atoms_) {
      if (!(at.mass > 0.0)) throw Error(ErrorKind::Domain, "singular masses must be positive");
      if (std::abs(std::abs(at.zeta) - 1.0) > 1e-14) throw Error(ErrorKind::Domain, "singular atoms must lie on the circle");
    }
  }

  const std::vector<SingularAtom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  cplx operator()(cplx z) const {
    cplx e = 0.0;
    for (const auto& at : atoms_) {
      if (std::abs(at.zeta - z) < 1e-15) throw Error(ErrorKind::Singularity, "evaluation at a singular atom");
      e -= at.mass * (at.zeta + z) / (at.zeta - z);
    }
    return std::exp(e);
  }

  CoefSeries series(std::size_t n) const {
    // (zeta + z)/(zeta - z) = 1 + 2 sum (z/zeta)^k
    CoefSeries g(std::max<std::size_t>(n, 1));
    for (const auto& at : atoms_) {
      g[0] -= at.mass;
      const cplx r = 1.0 / at.zeta;
      cplx p = r;
      for (std::size_t k = 1; k < n; ++k, p *= r) g[k] -= 2.0 * at.mass * p;
    }
    return series_exp(g, n);
  }

 private:
  std::vector<SingularAtom> atoms_;
};

class InnerFunction {
 public:
  InnerFunction() = default;
  explicit InnerFunction(BlaschkeProduct b, SingularInner s = {}) : blaschke_(std::move(b)), singular_(std::move(s)) {}

  static InnerFunction from_zeros(std::vector<cplx> zeros, cplx constant = 1.0) {
    return InnerFunction(BlaschkeProduct(std::move(zeros), constant));
  }
  static InnerFunction from_atoms(std::vector<SingularAtom> atoms) {
    return InnerFunction(BlaschkeProduct{}, SingularInner(std::move(atoms)));
  }

  const BlaschkeProduct& blaschke() const { return blaschke_; }
  const SingularInner& singular() const { return singular_; }
  bool is_finite_blaschke() const { return singular_.empty(); }
  bool is_constant() const { return blaschke_.degree() == 0 && singular_.empty(); }

  cplx operator()(cplx z) const { return blaschke_(z) * (singular_.empty() ? cplx{1.0} : singular_(z)); }

  CoefSeries series(std::size_t n) const {
    CoefSeries b = blaschke_.series(n);
    if (singular_.empty()) return b;
    return series_multiply(b, singular_.series(n), n);
  }

  InnerFunction operator*(const InnerFunction& o) const {
    std::vector<cplx> z = blaschke_.zeros();
    z.insert(z.end(), o.blaschke_.zeros().begin(), o.blaschke_.zeros().end());
    std::vector<SingularAtom> a = singular_.atoms();
    a.insert(a.end(), o.singular_.atoms().begin(), o.singular_.atoms().end());
    return InnerFunction(BlaschkeProduct(std::move(z), blaschke_.constant() * o.blaschke_.constant()),
                         SingularInner(std::move(a)));
  }

 private:
  BlaschkeProduct blaschke_;
  SingularInner singular_;
};

inline cplx inner_eval(const InnerFunction& m, cplx lambda) {
  if (std::abs(lambda) > 1.0 + 1e-15) throw Error(ErrorKind::Domain, "inner_eval requires |lambda| <= 1");
  return m(lambda);
}

class OuterFunction {
 public:
  OuterFunction() = default;
  OuterFunction(BoundarySamples log_modulus, CoefSeries coef)
      : log_modulus_(std::move(log_modulus)), coef_(std::move(coef)) {}

  const BoundarySamples& log_modulus() const { return log_modulus_; }
  const CoefSeries& coef() const { return coef_; }
  std::size_t M() const { return log_modulus_.M(); }

  cplx operator()(cplx z) const { return eval_poly(coef_.coeffs(), z); }

  BoundarySamples boundary() const { return to_boundary(coef_, std::max(M(), coef_.size())); }

 private:
  BoundarySamples log_modulus_;
  CoefSeries coef_;
};

// Outer function with boundary modulus w (samples must be real and positive).
// The analytic completion of log w is exponentiated with the series recurrence;
// the result keeps n coefficients (default: the grid size).
inline OuterFunction outer_from_modulus(const BoundarySamples& w, std::size_t n = 0) {
  const std::size_t M = w.M();
  if (!is_power_of_two(M)) throw Error(ErrorKind::InvalidGrid, "modulus grid must be a power of two");
  if (n == 0) n = M;
  BoundarySamples logw{CVec(static_cast<Eigen::Index>(M))};
  for (Eigen::Index j = 0; j < w.values.size(); ++j) {
    const cplx v = w.values[j];
    if (!std::isfinite(v.real()) || !(v.real() > 0.0) || std::abs(v.imag()) > 1e-12 * std::abs(v.real()))
      throw Error(ErrorKind::Domain, "outer_from_modulus needs finite positive samples");
    logw.values[j] = std::log(v.real());
  }
  const CoefSeries c = to_coef(logw, M);
  CoefSeries g(M / 2 + 1);
  g[0] = c[0].real();
  for (std::size_t k = 1; k < M / 2; ++k) g[k] = 2.0 * c[k];
  g[M / 2] = c[M / 2].real();
  return OuterFunction(std::move(logw), series_exp(g, n));
}

struct UVPair {
  CoefSeries u;
  OuterFunction v;
  double u_sup = 0.0;
  double v_sup = 0.0;
};

// v_f = outer function with modulus min(1, 1/|f|), u_f = f v_f.
inline UVPair uv_pair(const CoefSeries& f, std::size_t M = 1024) {
  if (f.empty() || f.norm() == 0.0) throw Error(ErrorKind::Degenerate, "uv_pair of the zero function");
  const BoundarySamples fb = to_boundary(f, M);
  BoundarySamples w{CVec(static_cast<Eigen::Index>(M))};
  for (Eigen::Index j = 0; j < fb.values.size(); ++j) {
    const double a = std::abs(fb.values[j]);
    w.values[j] = std::max(a > 1.0 ? 1.0 / a : 1.0, 1e-14);
  }
  UVPair out;
  out.v = outer_from_modulus(w, M);
  out.u = series_multiply(f, out.v.coef(), M);
  out.v_sup = to_boundary(out.v.coef(), M).sup_norm();
  out.u_sup = to_boundary(out.u, M).sup_norm();
  return out;
}

struct PolyFactorization {
  InnerFunction inner;
  CoefSeries outer;  // polynomial with no zeros in the open disk (boundary band included)
  RootReport roots;
};

// p = inner * outer with inner a finite Blaschke product built from the roots
// strictly inside |z| < 1 - 1e-3. The unimodular constant stays in the outer part.
inline PolyFactorization poly_inner_outer(const CoefSeries& p, std::size_t degree_cap = 64) {
  if (p.empty() || p.norm() == 0.0) throw Error(ErrorKind::Degenerate, "factorization of the zero polynomial");
  const CoefSeries q = poly_trim(p);
  PolyFactorization out;
  out.roots = polynomial_roots(q, degree_cap);
  std::vector<cplx> inside;
  CoefSeries outer = CoefSeries::constant(q[q.size() - 1]);
  for (const cplx& r : out.roots.roots) {
    if (std::abs(r) < 1.0 - kBoundaryBand) {
      inside.push_back(r);
      // z - r = -(r/|r|) (1 - conj(r) z) b_r(z);  z = b_0(z)
      if (r != cplx{}) outer = series_multiply(outer, CoefSeries{-(r / std::abs(r)), (r / std::abs(r)) * std::conj(r)});
    } else {
      outer = series_multiply(outer, CoefSeries{-r, 1.0});
    }
  }
  out.inner = InnerFunction::from_zeros(std::move(inside));
  out.outer = std::move(outer);
  return out;
}

namespace detail {

template <class T, class Close>
std::vector<T> multiset_intersection(const std::vector<T>& a, const std::vector<T>& b, Close close) {
  std::vector<bool> used(b.size(), false);
  std::vector<T> out;
  for (const T& x : a) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && close(x, b[j])) {
        used[j] = true;
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

inline InnerFunction inner_gcd(const InnerFunction& m1, const InnerFunction& m2) {
  auto zeros = detail::multiset_intersection(m1.blaschke().zeros(), m2.blaschke().zeros(),
                                             [](cplx x, cplx y) { return std::abs(x - y) <= kPairTol; });
  std::vector<SingularAtom> atoms;
  for (const auto& a : m1.singular().atoms())
    for (const auto& b : m2.singular().atoms())
      if (std::abs(a.zeta - b.zeta) <= kPairTol) {
        atoms.push_back({a.zeta, std::min(a.mass, b.mass)});
        break;
      }
  return InnerFunction(BlaschkeProduct(std::move(zeros)), SingularInner(std::move(atoms)));
}

inline bool inner_divides(const InnerFunction& m1, const InnerFunction& m2) {
  const InnerFunction g = inner_gcd(m1, m2);
  if (g.blaschke().degree() != m1.blaschke().degree()) return false;
  double need = 0.0, have = 0.0;
  for (const auto& a : m1.singular().atoms()) need += a.mass;
  for (const auto& a : g.singular().atoms()) have += a.mass;
  return g.singular().atoms().size() == m1.singular().atoms().size() && std::abs(need - have) <= kPairTol;
}

}  // namespace hardylab
