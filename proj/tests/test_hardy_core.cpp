#include <gtest/gtest.h>

#include <random>

#include "hardylab/hardylab.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

CoefSeries random_series(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  CoefSeries c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = cplx(nd(rng), nd(rng));
  return c;
}

std::vector<cplx> as_std(const CoefSeries& c) { return {c.coeffs().data(), c.coeffs().data() + c.size()}; }

}  // namespace

TEST(Boundary, MatchesDirectSummation) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 5u, 32u}) {
    const CoefSeries c = random_series(rng, n);
    const BoundarySamples b = to_boundary(c, 32);
    const auto ref = oracle::naive_boundary(as_std(c), 32);
    for (std::size_t j = 0; j < 32; ++j) EXPECT_NEAR(std::abs(b.values[static_cast<Eigen::Index>(j)] - ref[j]), 0.0, 1e-12);
  }
}

TEST(Boundary, RoundtripIsExact) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t);
    const CoefSeries c = random_series(rng, n);
    const CoefSeries back = to_coef(to_boundary(c, 64), n);
    EXPECT_LE((back.coeffs() - c.coeffs()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Boundary, RieszProjectionDropsNegativeFrequencies) {
  // conj(z) + 2 + 3z on the circle projects to 2 + 3z
  const BoundarySamples s = BoundarySamples::from_function(16, [](cplx z) { return std::conj(z) + 2.0 + 3.0 * z; });
  const CoefSeries c = to_coef(s, 4);
  EXPECT_NEAR(std::abs(c[0] - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[1] - 3.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[2]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[3]), 0.0, 1e-14);
}

TEST(Boundary, GridErrors) {
  const CoefSeries c{1.0, 2.0};
  EXPECT_THROW(to_boundary(c, 12), Error);
  EXPECT_THROW(to_boundary(CoefSeries(40), 32), Error);
  try {
    to_coef(to_boundary(c, 8), 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidOrder);
  }
  try {
    to_boundary(c, 12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidGrid);
  }
}

TEST(Inner, ConjugateSymmetricAndMatchesParseval) {
  std::mt19937_64 rng(3);
  const CoefSeries f = random_series(rng, 20), g = random_series(rng, 12);
  EXPECT_NEAR(std::abs(h2_inner(f, g) - std::conj(h2_inner(g, f))), 0.0, 1e-12);
  EXPECT_NEAR(h2_inner(f, f).real(), f.norm() * f.norm(), 1e-10);
  // boundary mean of f conj(g)
  const BoundarySamples bf = to_boundary(f, 64), bg = to_boundary(g, 64);
  cplx mean = 0.0;
  for (Eigen::Index j = 0; j < 64; ++j) mean += bf.values[j] * std::conj(bg.values[j]);
  mean /= 64.0;
  EXPECT_NEAR(std::abs(h2_inner(f, g) - mean), 0.0, 1e-11);
}

TEST(Kernel, ReproducesValuesAndIsBackwardShiftEigenvector) {
  std::mt19937_64 rng(4);
  const CoefSeries f = random_series(rng, 10);
  const cplx a(0.3, -0.4);
  const CoefSeries k = cauchy_kernel(a, 200);
  EXPECT_NEAR(std::abs(h2_inner(f, k) - oracle::poly(as_std(f), std::conj(a))), 0.0, 1e-12);
  for (std::size_t j = 0; j + 1 < 50; ++j) EXPECT_NEAR(std::abs(k[j + 1] - a * k[j]), 0.0, 1e-15);
  const CoefSeries k0 = cauchy_kernel(0.0, 4);
  EXPECT_EQ(k0[0], cplx(1.0));
  EXPECT_EQ(k0[1], cplx(0.0));
  EXPECT_THROW(cauchy_kernel(1.0, 4), Error);
}

TEST(Evaluation, HornerMatchesDirectSum) {
  std::mt19937_64 rng(5);
  const CoefSeries f = random_series(rng, 15);
  for (cplx z : {cplx(0.0), cplx(0.5, 0.2), cplx(-0.9, 0.1)})
    EXPECT_NEAR(std::abs(eval_disk(f, DiskPoint(z)) - oracle::poly(as_std(f), z)), 0.0, 1e-12);
  EXPECT_THROW(DiskPoint(cplx(1.0, 0.0)), Error);
  EXPECT_THROW(DiskPoint(cplx(0.8, 0.8)), Error);
}

TEST(Series, ExpOfZGivesFactorials) {
  const CoefSeries e = series_exp(CoefSeries{0.0, 1.0}, 20);
  double fact = 1.0;
  for (std::size_t k = 0; k < 20; ++k) {
    EXPECT_NEAR(e[k].real(), 1.0 / fact, 1e-15);
    fact *= static_cast<double>(k + 1);
  }
}

TEST(Series, DivideInvertsMultiply) {
  std::mt19937_64 rng(6);
  const CoefSeries a = random_series(rng, 30);
  const CoefSeries b{2.0, 0.5, -0.25};
  const CoefSeries q = series_divide(series_multiply(a, b, 30), b, 30);
  EXPECT_LE((q.coeffs() - a.coeffs()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(series_divide(a, CoefSeries{0.0, 1.0}, 4), Error);
}

TEST(Series, ShiftMovesCoefficients) {
  const CoefSeries a{1.0, 2.0, 3.0};
  const CoefSeries s = series_shift(a, 3);
  EXPECT_EQ(s[0], cplx(0.0));
  EXPECT_EQ(s[1], cplx(1.0));
  EXPECT_EQ(s[2], cplx(2.0));
  EXPECT_EQ(series_shift_by(a, 5, 4).norm(), 0.0);
}

TEST(Series, DegreeAndResize) {
  const CoefSeries a{1.0, 0.0, 1e-20};
  EXPECT_EQ(a.degree(), 2);
  EXPECT_EQ(a.degree(1e-15), 0);
  EXPECT_EQ(CoefSeries(3).degree(), -1);
  EXPECT_EQ(a.resized(5).size(), 5u);
  EXPECT_EQ(a.resized(1).size(), 1u);
}

TEST(Polynomial, RootsAgainstConstructedPolynomial) {
  const std::vector<cplx> roots = {0.5, cplx(0.0, 2.0), -1.5, cplx(0.3, -0.2)};
  const auto c = oracle::poly_from_roots(roots);
  CoefSeries p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = c[k];
  const RootReport r = polynomial_roots(p);
  ASSERT_EQ(r.roots.size(), roots.size());
  for (const cplx& want : roots) {
    double best = INFINITY;
    for (const cplx& got : r.roots) best = std::min(best, std::abs(got - want));
    EXPECT_LE(best, 1e-10);
  }
  EXPECT_LE(r.max_backward_error, 1e-12);
}

TEST(Polynomial, ZeroRootsAreStripped) {
  const RootReport r = polynomial_roots(CoefSeries{0.0, 0.0, -1.0, 1.0});  // z^2 (z - 1)
  EXPECT_EQ(r.zero_roots, 2u);
  ASSERT_EQ(r.roots.size(), 3u);
}

TEST(Polynomial, ZeroPolynomialIsDegenerate) {
  try {
    polynomial_roots(CoefSeries(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
  }
}

TEST(Polynomial, DegreeCapIsEnforced) {
  CoefSeries p(12);
  p[0] = 1.0;
  p[11] = 1.0;
  EXPECT_THROW(polynomial_roots(p, 8), Error);
}
