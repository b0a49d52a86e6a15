#include <gtest/gtest.h>

#include <algorithm>

#include "hardylab/hardylab.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

CVec unit(std::size_t n, std::size_t k = 0) {
  CVec e = CVec::Zero(static_cast<Eigen::Index>(n));
  e[static_cast<Eigen::Index>(k)] = 1.0;
  return e;
}

bool non_increasing(const std::vector<double>& v) { return std::is_sorted(v.rbegin(), v.rend()); }

}  // namespace

TEST(Closability, ZeroTargetIsTrivial) {
  ClosabilityScenario sc;
  sc.N = 64;
  const Witness w = nonclosability_search(sc, CVec::Zero(64), 1e-3, 3);
  EXPECT_TRUE(w.found);
  EXPECT_EQ(w.eps, 0.0);
  EXPECT_EQ(w.eps_by_cap.size(), 4u);
}

TEST(Closability, PolynomialsAgainstExpMultiples) {
  ClosabilityScenario sc;
  sc.N = 256;
  const CVec g = unit(256);
  const Witness w = nonclosability_search(sc, g, 0.1, 20);
  ASSERT_TRUE(w.found);
  EXPECT_LE(w.eps, 0.1);
  EXPECT_TRUE(non_increasing(w.eps_by_cap));
  EXPECT_EQ(w.eps_by_cap.size(), 21u);
  // the witness verifies itself: |h| and |Xh - g| are both within eps
  EXPECT_LE(w.h.norm(), 0.1);
  EXPECT_LE((w.Xh - g).norm(), 0.1);
  // h = n - m where m is the polynomial head of n
  ASSERT_GE(w.degree_m, 0);
  EXPECT_EQ(w.h.head(w.degree_m + 1).norm(), 0.0);
  EXPECT_EQ((w.h - w.Xh).tail(256 - w.degree_m - 1).norm(), 0.0);
  // n is a polynomial multiple of exp: exp(-z) n has degree <= degree_n
  const CoefSeries q = series_multiply(series_exp(CoefSeries{0.0, -1.0}, 256), CoefSeries(w.Xh), 256);
  EXPECT_LE(q.coeffs().tail(256 - w.degree_n - 1).norm(), 1e-10 * q.norm());
  // the first cap reaching eps is reported, not a later one
  const int first = static_cast<int>(std::find_if(w.eps_by_cap.begin(), w.eps_by_cap.end(), [](double e) { return e <= 0.1; }) -
                                     w.eps_by_cap.begin());
  EXPECT_EQ(w.degree_n, first);
}

TEST(Closability, KernelsImproveWithMorePoints) {
  ClosabilityScenario sc;
  sc.kind = ScenarioKind::PolyVsKernels;
  sc.N = 256;
  const Witness w = nonclosability_search(sc, unit(256), 1e-6, 12);
  EXPECT_FALSE(w.found);
  ASSERT_EQ(w.eps_by_cap.size(), 13u);
  EXPECT_TRUE(non_increasing(w.eps_by_cap));
  EXPECT_LT(w.eps_by_cap.back(), 0.5 * w.eps_by_cap[1]);
  ClosabilityScenario few = sc;
  few.points = {0.5, 0.6};
  EXPECT_THROW(nonclosability_search(few, unit(256), 0.1, 3), Error);
  EXPECT_THROW(nonclosability_search(sc, unit(100), 0.1, 3), Error);
}

TEST(Closability, BilateralArcs) {
  ClosabilityScenario sc;
  sc.kind = ScenarioKind::BilateralArcs;
  sc.M = 256;
  const CVec g = arcs_target(256);
  const Witness w = nonclosability_search(sc, g, 1e-6, 10);
  EXPECT_TRUE(non_increasing(w.eps_by_cap));
  EXPECT_LT(w.eps_by_cap.back(), w.eps_by_cap.front());
  // n lives on the arc e^{-is}, m on the arc e^{it}
  const CVec m = w.Xh - w.h;
  for (std::size_t j = 0; j < 256; ++j) {
    const double t = 2.0 * oracle::kPi * static_cast<double>(j) / 256.0;
    if (!(t > 0.5 * oracle::kPi)) EXPECT_EQ(w.Xh[static_cast<Eigen::Index>(j)], cplx(0.0)) << j;
    if (!(t > 0.0 && t < 1.5 * oracle::kPi)) EXPECT_NEAR(std::abs(m[static_cast<Eigen::Index>(j)]), 0.0, 1e-15) << j;
  }
}

TEST(Closability, NestedKernelPointsArePrefixes) {
  const auto a = nested_kernel_points(5), b = nested_kernel_points(30);
  EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_GE(b[i].real(), 0.5);
    EXPECT_LE(b[i].real(), 0.9);
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(b[i], b[j]);
  }
  EXPECT_NEAR(b[5].real(), 0.55, 1e-15);
}

TEST(Rsc, ShiftWithCauchyKernel) {
  const std::size_t N = 64;
  const RscResult r = rsc_witness(shift_matrix(N), unit(N), cauchy_kernel(0.5, N).coeffs(), 3, 1e-12);
  ASSERT_TRUE(r.q.found);
  EXPECT_EQ(r.q.degree, 1);
  EXPECT_NEAR(std::abs(r.q.u[1]), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.q.v[1] / r.q.v[0] + 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.q.u[0] / r.q.v[0] - 1.0), 0.0, 1e-10);
  EXPECT_TRUE(r.injective);
  // (u, v) is normalized jointly; |1 - S/2| is bounded below by 1/2
  EXPECT_GE(r.sigma_min_v / std::abs(r.q.v[0]), 0.5 - 1e-12);
  EXPECT_LE(r.sigma_min_v / std::abs(r.q.v[0]), 0.55);
}

TEST(Rsc, CompressedShiftOnZSquared) {
  const ModelBasis B = model_basis(InnerFunction::from_zeros({0.0, 0.0}), 16);
  const OperatorMatrix T = compress(shift_matrix(16), B);
  const CVec h0 = B.vectors.adjoint() * unit(16, 0);
  const CVec h = B.vectors.adjoint() * unit(16, 1);
  const RscResult r = rsc_witness(T, h0, h, 2);
  ASSERT_TRUE(r.q.found);
  EXPECT_EQ(r.q.degree, 1);
  EXPECT_NEAR(std::abs(r.q.u[1] / r.q.v[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.q.v[1]), 0.0, 1e-12);
  EXPECT_TRUE(r.injective);
}

TEST(Rsc, UnitProjectionInModelSpaces) {
  EXPECT_LE(model_unit_projection_gap(InnerFunction::from_zeros({0.5}), 128), 1e-10);
  EXPECT_LE(model_unit_projection_gap(InnerFunction::from_zeros({0.3, cplx(0.0, -0.6), 0.0}), 128), 1e-10);
}

TEST(SingularSplit, HalvesMultiplyBack) {
  const SingularSplit s = singular_split(1.0, 512);
  EXPECT_LE(s.product_mismatch, 1e-12);
  ASSERT_EQ(s.m1.singular().atoms().size(), 1u);
  EXPECT_DOUBLE_EQ(s.m1.singular().atoms()[0].mass, 0.5);
}

TEST(Biorthogonality, ShiftAndExample) {
  EXPECT_EQ(biorthogonality_suite(shift_matrix(64), unit(64), 8).deviation, 0.0);
  const ThetaModel m = theta_model(paper_example_theta(), 128);
  const BiorthogonalityReport r = biorthogonality_suite(m.T, m.f0, 1);
  EXPECT_NEAR(r.deviation, 0.0, 1e-14);
  EXPECT_LE(biorthogonality_suite(m.T, m.f0, 8).deviation, 1e-8);
}

TEST(Spectral, ShiftModel) {
  const SpectralPicture sp = spectral_picture_suite(shift_theta(), {0.0, cplx(0.3, -0.4)}, {32, 64}, {10, 20}, 0.5, 32, 8);
  ASSERT_EQ(sp.points.size(), 2u);
  for (const auto& p : sp.points) {
    ASSERT_TRUE(p.fredholm.stable);
    EXPECT_EQ(*p.fredholm.index, -1);
    EXPECT_EQ(*p.fredholm.kernel, 0u);
  }
  ASSERT_EQ(sp.density.size(), 2u);
  EXPECT_LE(sp.density[1].second, sp.density[0].second);
  EXPECT_LE(sp.density[1].second, 1e-3);
}

TEST(Suite, WorkedExampleAtReducedOrder) {
  PaperSuiteOptions o;
  o.N = 128;
  o.M = 512;
  const auto checks = paper_example_suite(o);
  ASSERT_FALSE(checks.empty());
  for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.name << " value " << c.value << " tol " << c.tol << " " << c.note;
}
