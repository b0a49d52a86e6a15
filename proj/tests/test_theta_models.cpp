#include <gtest/gtest.h>

#include "hardylab/hardylab.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

// theta2 of the worked example by hand: -2/5, then 6/5 * 2^-k
std::vector<cplx> example_theta2_coeffs(std::size_t n) {
  std::vector<cplx> c(n);
  c[0] = -0.4;
  for (std::size_t k = 1; k < n; ++k) c[k] = 1.2 * std::pow(0.5, static_cast<double>(k));
  return c;
}

const ThetaBasis& example_basis() {
  static const ThetaBasis B = theta_basis(paper_example_theta(), 64);
  return B;
}

}  // namespace

TEST(InnerColumn, ExampleIsInnerAndHalfIsNot) {
  const InnerColumnReport r = check_inner_column(paper_example_theta(), 1024);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_deviation, 1e-14);
  for (const cplx z : {cplx(0.3, 0.1), cplx(-0.5, 0.5)}) {
    EXPECT_NEAR(std::abs(paper_example_theta().theta1(z) - oracle::example_theta1(z)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(paper_example_theta().theta2(z) - oracle::example_theta2(z)), 0.0, 1e-15);
  }
  Theta half;
  half.theta1 = {CoefSeries{0.0, 0.5}, CoefSeries{1.0}};
  half.theta2 = {CoefSeries{0.0}, CoefSeries{1.0}};
  EXPECT_FALSE(check_inner_column(half).pass);
  try {
    theta_basis(half, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
  EXPECT_THROW(check_inner_column(half, 100), Error);
}

TEST(InnerColumn, DenominatorMustNotVanishInTheDisk) {
  Theta t = paper_example_theta();
  t.theta2.den = CoefSeries{0.5, -1.0};
  EXPECT_THROW(clear_theta(t), Error);
}

TEST(ThetaBasis, OrthonormalAndOrthogonalToColumns) {
  const ThetaBasis& B = example_basis();
  const std::size_t N = B.N;
  const CMat V = B.exact();
  EXPECT_LE((V.adjoint() * V - CMat::Identity(V.cols(), V.cols())).cwiseAbs().maxCoeff(), 1e-13);
  const CMat all = B.vectors;
  EXPECT_LE((all.adjoint() * all - CMat::Identity(all.cols(), all.cols())).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ(B.dim(), N + static_cast<std::size_t>(B.cleared.d));
  EXPECT_LE(B.exact_dim, B.dim());

  // against (theta1 z^k, theta2 z^k) built from the hand series
  const auto t2 = example_theta2_coeffs(N);
  double worst = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    CVec col = CVec::Zero(2 * static_cast<Eigen::Index>(N));
    if (k + 1 < N) col[static_cast<Eigen::Index>(k + 1)] = 0.6;
    for (std::size_t j = 0; j + k < N; ++j) col[static_cast<Eigen::Index>(N + j + k)] = t2[j];
    worst = std::max(worst, (V.adjoint() * col).norm());
  }
  EXPECT_LE(worst, 1e-12);
  // grades are nondecreasing and each column has the claimed degree
  for (std::size_t j = 0; j < B.exact_dim; ++j) {
    if (j) EXPECT_LE(B.grades[j - 1], B.grades[j]);
    const auto g = static_cast<Eigen::Index>(B.grades[j]);
    const auto n = static_cast<Eigen::Index>(N);
    const Eigen::Index above = n - g - 1;
    if (above > 0) {
      EXPECT_LE(V.col(static_cast<Eigen::Index>(j)).segment(g + 1, above).norm(), 1e-13);
      EXPECT_LE(V.col(static_cast<Eigen::Index>(j)).segment(n + g + 1, above).norm(), 1e-13);
    }
  }
}

TEST(ThetaBasis, OnePlusZeroIsInTheModel) {
  const ThetaBasis& B = example_basis();
  EXPECT_NEAR(B.coords(CoefSeries{1.0}, CoefSeries{0.0}).norm(), 1.0, 1e-13);
  // 0 + 1 is not: theta2(0) != 0
  EXPECT_LT(B.coords(CoefSeries{0.0}, CoefSeries{1.0}).norm(), 0.95);
}

TEST(ThetaBasis, Errors) {
  EXPECT_THROW(theta_basis(paper_example_theta(), 16), Error);
  Theta zero;
  zero.theta1 = {CoefSeries{0.0}, CoefSeries{1.0}};
  zero.theta2 = {CoefSeries{0.0}, CoefSeries{1.0}};
  EXPECT_THROW(clear_theta(zero), Error);
}

TEST(STheta, InvariantAndAgreesWithCalculus) {
  const ThetaBasis& B = example_basis();
  EXPECT_LE(s_theta_invariance_residual(B), 1e-12);
  const OperatorMatrix T = s_theta(B);
  const OperatorMatrix Z = theta_calculus(CoefSeries{0.0, 1.0}, B);
  EXPECT_EQ(Z.trust, T.trust);
  const auto t = static_cast<Eigen::Index>(T.trust);
  EXPECT_LE((T.entries.leftCols(t) - Z.entries.leftCols(t)).norm(), 1e-13);
  // the adjoint kernel is 1 + 0
  const KernelResult k = require_kernel(T.entries.adjoint());
  ASSERT_EQ(k.dim(), 1u);
  const CVec one = B.coords(CoefSeries{1.0}, CoefSeries{0.0});
  EXPECT_LE(principal_angle(one, CVec(k.basis.col(0))), 1e-8);
}

TEST(STheta, ShiftPresetIsTheShift) {
  const ThetaBasis B = theta_basis(shift_theta(), 32);
  EXPECT_EQ(B.exact_dim, 32u);
  const OperatorMatrix T = s_theta(B);
  const auto t = static_cast<Eigen::Index>(T.trust);
  const CMat Tr = T.entries.leftCols(t);
  EXPECT_LE((Tr.adjoint() * Tr - CMat::Identity(t, t)).cwiseAbs().maxCoeff(), 1e-13);
  const FredholmReport f = theta_fredholm(shift_theta(), 0.0, {32, 64});
  ASSERT_TRUE(f.stable);
  EXPECT_EQ(*f.index, -1);
  EXPECT_EQ(*f.kernel, 0u);
}

TEST(STheta, IntertwiningAtRoundoff) {
  const ThetaBasis B = theta_basis(paper_example_theta(), 128);
  const IntertwiningReport r = intertwining(B);
  EXPECT_LE(r.residual, 1e-12);
  EXPECT_GT(r.q_sigma_min, 1e-6);
  // Q on a single vector, against the hand formula
  const CoefSeries f1{1.0, 0.5}, f2{0.0, 0.0, 1.0};
  const CoefSeries q = quasiaffinity_Q(paper_example_theta(), f1, f2, 16);
  for (const cplx z : {cplx(0.2, 0.1), cplx(-0.3)}) {
    const cplx want = oracle::example_theta1(z) * z * z - oracle::example_theta2(z) * (1.0 + 0.5 * z);
    EXPECT_NEAR(std::abs(eval_poly(q.coeffs(), z) - want), 0.0, 1e-9);
  }
}

TEST(ResidualProjection, RankOneProjection) {
  const auto P = residual_projection(paper_example_theta(), 64);
  ASSERT_EQ(P.size(), 64u);
  for (const auto& p : P) {
    EXPECT_LE((p * p - p).norm(), 1e-14);
    EXPECT_LE((p - p.adjoint()).norm(), 1e-15);
    EXPECT_NEAR(std::abs(p.trace() - 1.0), 0.0, 1e-14);
  }
}

TEST(Confluence, ExampleIsConfluent) {
  const ConfluenceReport r = confluence_test(paper_example_theta(), 64);
  EXPECT_TRUE(r.confluent);
  EXPECT_TRUE(r.common.is_constant());
  ASSERT_EQ(r.sigma_certificates.size(), 3u);
  for (const auto& [name, s] : r.sigma_certificates) EXPECT_GE(s, 1e-4) << name;
}

TEST(Confluence, CommonFactorGivesWitness) {
  const ConfluenceReport r = confluence_test(common_factor_z_theta(), 64);
  EXPECT_FALSE(r.confluent);
  ASSERT_EQ(r.common.blaschke().degree(), 1u);
  EXPECT_EQ(r.common.blaschke().zeros()[0], cplx(0.0));
  ASSERT_TRUE(r.witness_residual.has_value());
  EXPECT_LE(*r.witness_residual, 1e-8);
  EXPECT_LE(*r.witness_leak, 1e-8);
}

TEST(Confluence, InnerPartsFromTheNumerators) {
  // without declared inner parts the zeros come from the numerators
  Theta t = common_factor_z_theta();
  t.inner1.reset();
  t.inner2.reset();
  const ConfluenceReport r = confluence_test(t, 64);
  EXPECT_FALSE(r.confluent);
  EXPECT_EQ(r.common.blaschke().degree(), 1u);
  EXPECT_FALSE(confluence_test(z_z2_theta(), 64).confluent);
}

TEST(Cyclicity, CoronaPairIsCyclic) {
  const CoefSeries f1{2.5, -1.25}, f2{10.0 / 3.0};
  const CyclicityReport r = cyclicity_test(paper_example_theta(), f1, f2);
  EXPECT_EQ(r.verdict, Cyclicity::Cyclic);
  EXPECT_EQ(cyclicity_test(paper_example_theta(), CoefSeries{0.0}, CoefSeries{1.0}).verdict, Cyclicity::NotCyclic);
  EXPECT_EQ(cyclicity_test(paper_example_theta(), CoefSeries{0.0}, CoefSeries{0.0}).verdict, Cyclicity::NotCyclic);
}

TEST(Corona, FindsTheHandPair) {
  const CoronaResult c = corona_similarity(paper_example_theta());
  ASSERT_TRUE(c.feasible);
  EXPECT_LE(c.boundary_residual, 1e-10);
  for (const cplx z : {cplx(0.0), cplx(0.4, -0.3), cplx(-0.7, 0.2)}) {
    EXPECT_NEAR(std::abs(c.f1(z) - oracle::example_f1(z)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(c.f2(z) - oracle::example_f2(z)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(oracle::example_theta1(z) * c.f2(z) - oracle::example_theta2(z) * c.f1(z) - 1.0), 0.0, 1e-10);
  }
}

TEST(Corona, CommonFactorIsInfeasible) {
  const CoronaResult c = corona_similarity(common_factor_z_theta(), 8);
  EXPECT_FALSE(c.feasible);
  ASSERT_EQ(c.residual_by_degree.size(), 9u);
  for (double r : c.residual_by_degree) EXPECT_GT(r, 1e-6);
}

TEST(RatioField, OwnKernelVectorGivesOne) {
  const ThetaModel m = theta_model(paper_example_theta(), 64);
  const EigenvectorField F(m.T, m.f0);
  const RatioTable t = ratio_field_probe(F, m.f0, {0.2, 0.4}, 8);
  ASSERT_EQ(t.samples.size(), 16u);
  for (const auto& s : t.samples) {
    EXPECT_FALSE(s.pole);
    EXPECT_NEAR(std::abs(s.ratio - 1.0), 0.0, 1e-10);
  }
  for (const auto& [rho, ms] : t.mean_square_by_radius) EXPECT_NEAR(ms, 1.0, 1e-9);
}

TEST(EigenvectorField, ExampleOrthogonalityAtHalf) {
  const ThetaModel m = theta_model(paper_example_theta(), 128);
  const EigenvectorField F(m.T, m.f0);
  const CVec a = F(0.0), b = F(0.5);
  EXPECT_LE(std::abs(a.dot(b)), 1e-8);
  EXPECT_LE(F.eigen_residual(b, 0.5), 1e-8);
}
