#pragma once

// Experiment drivers: non-closability witnesses, rationally strictly cyclic
// witnesses, bi-orthogonality, spectral-picture and worked-example suites.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hardylab/presets.hpp"
#include "hardylab/report.hpp"
#include "hardylab/theta_models.hpp"

namespace hardylab {

// ---------------------------------------------------------------- closability

enum class ScenarioKind { PolyVsOuter, PolyVsKernels, BilateralArcs };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PolyVsOuter: return "poly-vs-outer";
    case ScenarioKind::PolyVsKernels: return "poly-vs-kernels";
    case ScenarioKind::BilateralArcs: return "bilateral-arcs";
  }
  return "unknown";
}

// Taylor coefficients 1/k! of exp(z).
inline CoefSeries exp_series(std::size_t n) {
  CoefSeries c(n);
  double f = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = 1.0 / f;
    f *= static_cast<double>(k + 1);
  }
  return c;
}

// 0.5, 0.6, 0.7, 0.8, 0.9, then midpoints of consecutive points, repeatedly.
inline std::vector<cplx> nested_kernel_points(std::size_t count) {
  std::vector<double> grid = {0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<cplx> out(grid.begin(), grid.end());
  while (out.size() < count) {
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double mid = 0.5 * (grid[i] + grid[i + 1]);
      out.emplace_back(mid);
      next.push_back(grid[i]);
      next.push_back(mid);
    }
    next.push_back(grid.back());
    grid = next;
  }
  out.resize(count);
  return out;
}

struct ClosabilityScenario {
  ScenarioKind kind = ScenarioKind::PolyVsOuter;
  CoefSeries f;                 // the outer function for PolyVsOuter (default exp)
  std::vector<cplx> points;     // kernel points for PolyVsKernels (default nested sequence)
  double arc = 1.5 * kPi;       // arcs e^{+-it}, 0 < t < arc
  std::size_t N = 256;          // truncation order of the H2 scenarios
  std::size_t M = 1024;         // grid for BilateralArcs
};

// h = n - m with m in the first manifold, n in the second; X h = n.
struct Witness {
  CVec h;
  CVec Xh;
  double eps = INFINITY;      // max(|h|, |Xh - g|)
  double h_norm = INFINITY;
  double target_dist = INFINITY;
  int degree_n = -1;          // polynomial degree (or kernel count) used for n
  int degree_m = -1;          // polynomial degree used for m
  bool found = false;
  std::vector<double> eps_by_cap;  // best achieved eps for caps 0..cap (non-increasing)
};

namespace detail {

inline CVec lstsq(const CMat& A, const CVec& b, double rcond = 1e-13) {
  Eigen::BDCSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rcond);
  return svd.solve(b);
}

// Smallest K with the coefficients of n above K carrying norm <= budget.
inline int truncation_degree(const CVec& n, double budget) {
  double tail2 = 0.0;
  for (Eigen::Index k = n.size() - 1; k >= 0; --k) {
    tail2 += std::norm(n[k]);
    if (std::sqrt(tail2) > budget) return static_cast<int>(k);
  }
  return -1;
}

inline void finish_h2_witness(Witness& w, const CVec& n, const CVec& g, int deg_n) {
  const double dist = (n - g).norm();
  const double budget = std::max(dist, 1e-14 * std::max(1.0, n.norm()));
  const int K = truncation_degree(n, budget);
  CVec m = CVec::Zero(n.size());
  if (K >= 0) m.head(K + 1) = n.head(K + 1);
  w.h = n - m;
  w.Xh = n;
  w.h_norm = w.h.norm();
  w.target_dist = dist;
  w.eps = std::max(w.h_norm, dist);
  w.degree_n = deg_n;
  w.degree_m = K;
}

}  // namespace detail

// Searches caps 0..cap (polynomial degree of q, or number of kernel
// points, or polynomial degree on the arcs); keeps the best witness so far
// and reports the first cap reaching eps. Returned witnesses re-verify
// |h| <= eps and |Xh - g| <= eps; otherwise found stays false.
inline Witness nonclosability_search(const ClosabilityScenario& sc, const CVec& g, double eps, int cap) {
  Witness best;
  std::optional<Witness> first;
  best.eps_by_cap.reserve(static_cast<std::size_t>(cap + 1));
  const bool arcs = sc.kind == ScenarioKind::BilateralArcs;
  const std::size_t N = arcs ? sc.M : sc.N;
  if (static_cast<std::size_t>(g.size()) != N) throw Error(ErrorKind::InvalidOrder, "target length does not match the scenario");

  // BilateralArcs vectors live on the grid; norms are L2 means.
  const double wnorm = arcs ? 1.0 / std::sqrt(static_cast<double>(sc.M)) : 1.0;
  std::vector<bool> plus, minus;
  if (arcs) {
    for (std::size_t j = 0; j < sc.M; ++j) {
      const double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(sc.M);
      plus.push_back(t > 0.0 && t < sc.arc);
      minus.push_back(t > 2.0 * kPi - sc.arc);  // e^{-is}, 0 < s < arc
    }
  }
  const CoefSeries f = sc.f.empty() ? exp_series(N) : sc.f.resized(N);
  const std::vector<cplx> pts = sc.points.empty() ? nested_kernel_points(static_cast<std::size_t>(std::max(cap, 1))) : sc.points;

  for (int c = 0; c <= cap; ++c) {
    Witness w;
    if (g.norm() == 0.0) {
      w.h = CVec::Zero(g.size());
      w.Xh = w.h;
      w.eps = w.h_norm = w.target_dist = 0.0;
      w.degree_n = w.degree_m = 0;
    } else if (sc.kind == ScenarioKind::PolyVsOuter) {
      CMat A(static_cast<Eigen::Index>(N), c + 1);
      for (int j = 0; j <= c; ++j) A.col(j) = series_shift_by(f, static_cast<std::size_t>(j), N).coeffs();
      const CVec n = A * detail::lstsq(A, g);
      detail::finish_h2_witness(w, n, g, c);
    } else if (sc.kind == ScenarioKind::PolyVsKernels) {
      if (c == 0) {
        detail::finish_h2_witness(w, CVec::Zero(g.size()), g, 0);
      } else {
        if (static_cast<std::size_t>(c) > pts.size()) throw Error(ErrorKind::Config, "not enough kernel points for the cap");
        CMat A(static_cast<Eigen::Index>(N), c);
        for (int j = 0; j < c; ++j) A.col(j) = cauchy_kernel(pts[static_cast<std::size_t>(j)], N).coeffs();
        const CVec n = A * detail::lstsq(A, g, 1e-12);
        detail::finish_h2_witness(w, n, g, c);
      }
    } else {
      // m = chi_+ p, n = chi_- q with polynomials p, q of degree <= c
      auto fit = [&](const std::vector<bool>& mask) {
        std::vector<Eigen::Index> rows;
        for (std::size_t j = 0; j < sc.M; ++j)
          if (mask[j]) rows.push_back(static_cast<Eigen::Index>(j));
        CMat A(static_cast<Eigen::Index>(rows.size()), c + 1);
        CVec b(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const cplx z = BoundarySamples::grid_point(static_cast<std::size_t>(rows[r]), sc.M);
          cplx p = 1.0;
          for (int k = 0; k <= c; ++k, p *= z) A(static_cast<Eigen::Index>(r), k) = p;
          b[static_cast<Eigen::Index>(r)] = g[rows[r]];
        }
        const CVec x = detail::lstsq(A, b, 1e-12);
        const CVec fitted = A * x;
        CVec out = CVec::Zero(static_cast<Eigen::Index>(sc.M));
        for (std::size_t r = 0; r < rows.size(); ++r) out[rows[r]] = fitted[static_cast<Eigen::Index>(r)];
        return out;
      };
      const CVec m = fit(plus);
      const CVec n = fit(minus);
      w.h = n - m;
      w.Xh = n;
      w.h_norm = w.h.norm() * wnorm;
      w.target_dist = (n - g).norm() * wnorm;
      w.eps = std::max(w.h_norm, w.target_dist);
      w.degree_n = w.degree_m = c;
    }
    if (w.eps < best.eps) {
      auto table = std::move(best.eps_by_cap);
      best = w;
      best.eps_by_cap = std::move(table);
    }
    best.eps_by_cap.push_back(best.eps);
    if (!first && best.h_norm <= eps && best.target_dist <= eps) first = best;
  }
  Witness out = first ? *first : best;
  out.eps_by_cap = best.eps_by_cap;
  // self-check before emitting
  if (first) {
    const double hn = out.h.norm() * wnorm;
    const double td = (out.Xh - g).norm() * wnorm;
    out.found = hn <= eps && td <= eps;
  }
  return out;
}

// Boundary indicator of the arc intersection used as the BilateralArcs target.
inline CVec arcs_target(std::size_t M, double arc = 1.5 * kPi) {
  CVec g = CVec::Zero(static_cast<Eigen::Index>(M));
  for (std::size_t j = 0; j < M; ++j) {
    const double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(M);
    if (t > 0.0 && t < arc && t > 2.0 * kPi - arc) g[static_cast<Eigen::Index>(j)] = 1.0;
  }
  return g;
}

// A singular inner atom split into two halves m = m1 m2; reports the
// coefficient mismatch of the product against m. Equal masses.
struct SingularSplit {
  InnerFunction m, m1, m2;
  double product_mismatch = 0.0;
};

inline SingularSplit singular_split(double mass, std::size_t N = 256, cplx zeta = 1.0) {
  SingularSplit s;
  s.m = InnerFunction::from_atoms({{zeta, mass}});
  s.m1 = InnerFunction::from_atoms({{zeta, 0.5 * mass}});
  s.m2 = s.m1;
  s.product_mismatch = series_add(series_multiply(s.m1.series(N), s.m2.series(N), N), s.m.series(N), -1.0).norm();
  return s;
}

// ---------------------------------------------------------------- rsc witnesses

struct RscResult {
  QuotientPair q;
  double sigma_min_v = 0.0;
  bool determinate = true;
  bool injective = false;
};

inline RscResult rsc_witness(const OperatorMatrix& T, const CVec& h0, const CVec& h, int d, double tol = 1e-10) {
  RscResult r;
  r.q = quotient_solver(T, h, h0, d, tol);
  if (!r.q.found) return r;
  const OperatorMatrix V = poly_of(T, r.q.v);
  const CMat B = V.trusted_block();
  const RankInfo ri = numeric_rank(B);
  r.determinate = ri.determinate;
  r.sigma_min_v = ri.rank == static_cast<std::size_t>(B.cols()) ? ri.sigma_min_kept : 0.0;
  r.injective = ri.determinate && ri.rank == static_cast<std::size_t>(B.cols()) && r.sigma_min_v > 1e-6;
  return r;
}

// |(1 - conj(m(0)) m) - P_{H(m)} 1| for a finite Blaschke m.
inline double model_unit_projection_gap(const InnerFunction& m, std::size_t N) {
  const ModelBasis B = model_basis(m, N);
  CVec e0 = CVec::Zero(static_cast<Eigen::Index>(N));
  e0[0] = 1.0;
  const CVec p = B.vectors * (B.vectors.adjoint() * e0);
  CoefSeries k = series_scale(m.series(N), -std::conj(m(0.0)));
  k[0] += 1.0;
  return (k.coeffs() - p).norm();
}

// ---------------------------------------------------------------- suites

struct BiorthogonalityReport {
  CMat pairing;
  double deviation = 0.0;
};

inline BiorthogonalityReport biorthogonality_suite(const OperatorMatrix& T, const CVec& f0, int K) {
  const EigenvectorField F(T, f0);
  BiorthogonalityReport r;
  r.pairing = biorthogonality_matrix(F, K);
  r.deviation = (r.pairing - CMat::Identity(K, K)).cwiseAbs().maxCoeff();
  return r;
}

// S(Theta) model for a Theta with f0 = normalized 1 + 0 (requires theta1(0) = 0).
struct ThetaModel {
  ThetaBasis basis;
  OperatorMatrix T;
  CVec f0;
};

inline ThetaModel theta_model(const Theta& th, std::size_t N) {
  ThetaModel m{theta_basis(th, N), {}, {}};
  m.T = s_theta(m.basis);
  const KernelResult k = require_kernel(m.T.entries.adjoint());
  if (k.dim() != 1) throw Error(ErrorKind::Multiplicity, "ker S(Theta)* is not one-dimensional");
  m.f0 = k.basis.col(0);
  // fix the phase against 1 + 0 when it has a component there
  const CVec one = m.basis.coords(CoefSeries{1.0}, CoefSeries{0.0});
  const cplx ph = one.dot(m.f0);
  if (std::abs(ph) > 1e-8) m.f0 *= std::conj(ph) / std::abs(ph);
  return m;
}

struct KrylovComplement {
  std::size_t dim = 0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double angle = 0.0;  // between the complement direction and f(1/2)
};

// Complement of span{S(Theta)^k f(0) : k <= N - 8} tested against
// H(Theta) restricted to degree < N/2, in an ambient of order N + extra.
inline KrylovComplement krylov_complement(const Theta& th, std::size_t N, cplx lambda = 0.5, std::size_t extra = 64) {
  const ThetaModel mdl = theta_model(th, N + extra);
  const OperatorMatrix& T = mdl.T;
  const Eigen::Index n = T.rows();
  const int steps = static_cast<int>(N) - 8;
  CMat Q(n, steps + 1);
  Q.col(0) = mdl.f0.normalized();
  Eigen::Index q = 1;
  for (int k = 1; k <= steps; ++k) {
    CVec w = T.entries * Q.col(q - 1);
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(q) * (Q.leftCols(q).adjoint() * w);
    const double nw = w.norm();
    if (nw < 1e-13) break;
    Q.col(q++) = w / nw;
  }
  std::vector<Eigen::Index> test;
  for (std::size_t j = 0; j < mdl.basis.exact_dim; ++j)
    if (mdl.basis.grades[j] < static_cast<int>(N / 2)) test.push_back(static_cast<Eigen::Index>(j));
  CMat Vt = CMat::Zero(n, static_cast<Eigen::Index>(test.size()));
  for (std::size_t i = 0; i < test.size(); ++i) Vt(test[i], static_cast<Eigen::Index>(i)) = 1.0;
  const CMat Qk = Q.leftCols(q);
  const CMat R = Vt - Qk * (Qk.adjoint() * Vt);
  Eigen::BDCSVD<CMat> svd(R, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  KrylovComplement out;
  out.sigma1 = s[0];
  out.sigma2 = s.size() > 1 ? s[1] : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-6) ++out.dim;
  const EigenvectorField F(T, mdl.f0);
  out.angle = principal_angle(CVec(svd.matrixU().col(0)), F(lambda));
  return out;
}

struct SpectralPoint {
  cplx lambda;
  FredholmReport fredholm;
};

struct SpectralPicture {
  std::vector<SpectralPoint> points;
  std::vector<std::pair<std::size_t, double>> density;  // (sample count, max projection error)
};

inline FredholmReport theta_fredholm(const Theta& th, cplx lambda, const std::vector<std::size_t>& ladder) {
  return fredholm_probe([&](std::size_t N) { return shifted(s_theta(theta_basis(th, N)), lambda); }, ladder);
}

// Per-lambda index ladder, and density of {f(lambda_i)} on a circle against
// the trusted basis vectors of degree < probe_degree.
inline SpectralPicture spectral_picture_suite(const Theta& th, const std::vector<cplx>& lambdas,
                                              const std::vector<std::size_t>& ladder,
                                              const std::vector<std::size_t>& counts = {10, 20, 40, 80},
                                              double radius = 0.5, std::size_t density_N = 64, int probe_degree = 16) {
  SpectralPicture sp;
  std::vector<ThetaModel> models;
  for (std::size_t N : ladder) models.push_back(theta_model(th, N));
  for (const cplx& lam : lambdas) {
    SpectralPoint p{lam, {}};
    std::size_t i = 0;
    p.fredholm = fredholm_probe([&](std::size_t) { return shifted(models[i++].T, lam); }, ladder);
    sp.points.push_back(p);
  }
  const ThetaModel mdl = theta_model(th, density_N);
  const EigenvectorField F(mdl.T, mdl.f0);
  std::vector<Eigen::Index> probe;
  for (std::size_t j = 0; j < mdl.T.trust; ++j)
    if (mdl.basis.grades[j] < probe_degree) probe.push_back(static_cast<Eigen::Index>(j));
  for (std::size_t cnt : counts) {
    CMat Fm(mdl.T.rows(), static_cast<Eigen::Index>(cnt));
    for (std::size_t j = 0; j < cnt; ++j) {
      const cplx lam = std::polar(radius, 2.0 * kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(cnt));
      const CVec f = F(lam, false);
      Fm.col(static_cast<Eigen::Index>(j)) = f / f.norm();
    }
    const CMat Qf = orthonormalize(Fm, 1e-13);
    double worst = 0.0;
    for (Eigen::Index j : probe) {
      CVec e = CVec::Zero(mdl.T.rows());
      e[j] = 1.0;
      worst = std::max(worst, (e - Qf * (Qf.adjoint() * e)).norm());
    }
    sp.density.emplace_back(cnt, worst);
  }
  return sp;
}

struct PaperSuiteOptions {
  std::size_t N = 256;
  std::size_t M = 1024;
  double inner_tol = 1e-10;
  double angle_tol = 1e-6;
  double orth_tol = 1e-8;
  double krylov_tol = 1e-4;
  double intertwining_tol = 1e-8;
  double corona_tol = 1e-10;
};

// Worked example end to end; every sub-step becomes one or more checks.
inline std::vector<Check> paper_example_suite(const PaperSuiteOptions& o = {}) {
  const Theta th = paper_example_theta();
  const long N = static_cast<long>(o.N);
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      checks.push_back(Check::failed(name, e.what(), N));
    }
  };

  guarded("inner_column_deviation", [&] {
    checks.push_back(Check::at_most("inner_column_deviation", check_inner_column(th, o.M).max_deviation, o.inner_tol, N));
  });

  guarded("model", [&] {
    const ThetaModel mdl = theta_model(th, o.N);
    const CVec one = mdl.basis.coords(CoefSeries{1.0}, CoefSeries{0.0});
    checks.push_back(Check::at_most("ker_adjoint_angle", principal_angle(mdl.f0, one), o.angle_tol, N));

    CMat A = -mdl.T.entries.adjoint();
    A.diagonal().array() += 0.5;
    const KernelResult kh = require_kernel(A);
    checks.push_back(Check::equals("ker_half_dim", static_cast<double>(kh.dim()), 1.0, N));
    const CVec x = mdl.basis.coords(CoefSeries{0.0}, RationalFunction{CoefSeries{1.0}, CoefSeries{2.0, -1.0}}.series(o.N));
    if (kh.dim() >= 1) checks.push_back(Check::at_most("ker_half_angle", principal_angle(CVec(kh.basis.col(0)), x), o.angle_tol, N));

    const EigenvectorField F(mdl.T, mdl.f0);
    const CVec fa = F(0.0), fb = F(0.5);
    checks.push_back(Check::at_most("f0_f_half_inner", std::abs(fb.dot(fa)) / (fa.norm() * fb.norm()), o.orth_tol, N));
    checks.push_back(Check::at_most("f_half_eigen_residual", F.eigen_residual(fb, 0.5), 1e-8, N));

    const IntertwiningReport ir = intertwining(mdl.basis);
    checks.push_back(Check::at_most("q_intertwining", ir.residual, o.intertwining_tol, N));
  });

  guarded("krylov_complement", [&] {
    const KrylovComplement kc = krylov_complement(th, o.N);
    checks.push_back(Check::equals("krylov_complement_dim", static_cast<double>(kc.dim), 1.0, N));
    checks.push_back(Check::at_most("krylov_complement_angle", kc.angle, o.krylov_tol, N));
  });

  guarded("corona_residual", [&] {
    const CoronaResult cr = corona_similarity(th, 8, std::max<std::size_t>(o.M, 512));
    checks.push_back(Check::flag("corona_feasible", cr.feasible, N));
    if (cr.feasible) checks.push_back(Check::at_most("corona_residual", cr.boundary_residual, o.corona_tol, N));
  });

  guarded("confluent", [&] {
    const ConfluenceReport rep = confluence_test(th, 128);
    checks.push_back(Check::flag("confluent", rep.confluent, N));
  });

  sort_checks(checks);
  return checks;
}

}  // namespace hardylab
