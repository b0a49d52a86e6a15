#include <gtest/gtest.h>

#include <random>

#include "hardylab/hardylab.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

double max_dev_on_circle(const CoefSeries& c, const std::function<cplx(cplx)>& f, double radius, std::size_t pts = 64) {
  double worst = 0.0;
  for (std::size_t j = 0; j < pts; ++j) {
    const cplx z = radius * BoundarySamples::grid_point(j, pts);
    worst = std::max(worst, std::abs(eval_poly(c.coeffs(), z) - f(z)));
  }
  return worst;
}

}  // namespace

TEST(Blaschke, SeriesMatchesProductFormula) {
  const std::vector<cplx> zeros = {0.5, cplx(-0.3, 0.6), 0.0, cplx(0.7, -0.1)};
  const BlaschkeProduct b(zeros);
  EXPECT_LE(max_dev_on_circle(b.series(400), [&](cplx z) { return oracle::blaschke(zeros, z); }, 0.9), 1e-12);
  for (std::size_t j = 0; j < 32; ++j) {
    const cplx z = BoundarySamples::grid_point(j, 32);
    EXPECT_NEAR(std::abs(b(z)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(b(z) - oracle::blaschke(zeros, z)), 0.0, 1e-14);
  }
  for (const cplx& a : zeros) EXPECT_NEAR(std::abs(b(a)), 0.0, 1e-15);
}

TEST(Blaschke, RejectsZerosOutsideTheDisk) {
  EXPECT_THROW(BlaschkeProduct({1.0}), Error);
  EXPECT_THROW(BlaschkeProduct({0.5}, 2.0), Error);
}

TEST(Singular, SeriesAndModulus) {
  const InnerFunction s = InnerFunction::from_atoms({{1.0, 0.7}});
  const auto f = [](cplx z) { return std::exp(-0.7 * (1.0 + z) / (1.0 - z)); };
  EXPECT_LE(max_dev_on_circle(s.series(1500), f, 0.5), 1e-12);
  EXPECT_NEAR(std::abs(s(BoundarySamples::grid_point(3, 8))), 1.0, 1e-14);
  try {
    inner_eval(s, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Singularity);
  }
  EXPECT_THROW(inner_eval(s, 1.5), Error);
  EXPECT_THROW(SingularInner({{cplx(0.5), 1.0}}), Error);
  EXPECT_THROW(SingularInner({{cplx(1.0), -1.0}}), Error);
}

TEST(Outer, ModulusIsRecovered) {
  const std::size_t M = 1024;
  const std::vector<std::function<double(cplx)>> ws = {
      [](cplx) { return 2.0; },
      [](cplx z) { return std::abs(1.0 - 0.5 * z); },
      [](cplx z) { return std::min(1.0, 1.0 / std::abs(std::exp(z))); },
      [](cplx z) { return 1.0 + 0.5 * std::cos(3.0 * std::arg(z)); },
  };
  for (const auto& w : ws) {
    const BoundarySamples s = BoundarySamples::from_function(M, [&](cplx z) { return cplx(w(z)); });
    const OuterFunction O = outer_from_modulus(s);
    const BoundarySamples b = to_boundary(O.coef(), M);
    for (std::size_t j = 0; j < M; ++j)
      EXPECT_NEAR(std::abs(b.values[static_cast<Eigen::Index>(j)]), s.values[static_cast<Eigen::Index>(j)].real(), 1e-6);
    // log|O(0)| is the boundary mean of log w
    double mean = 0.0;
    for (std::size_t j = 0; j < M; ++j) mean += std::log(s.values[static_cast<Eigen::Index>(j)].real());
    EXPECT_NEAR(std::log(std::abs(O(0.0))), mean / static_cast<double>(M), 1e-10);
    EXPECT_GT(O(0.0).real(), 0.0);
  }
}

TEST(Outer, RecoversAZeroFreePolynomial) {
  // |1 - z/2| is the modulus of the outer polynomial 1 - z/2
  const BoundarySamples s = BoundarySamples::from_function(256, [](cplx z) { return cplx(std::abs(1.0 - 0.5 * z)); });
  const OuterFunction O = outer_from_modulus(s, 8);
  EXPECT_NEAR(std::abs(O.coef()[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(O.coef()[1] + 0.5), 0.0, 1e-12);
  for (std::size_t k = 2; k < 8; ++k) EXPECT_NEAR(std::abs(O.coef()[k]), 0.0, 1e-12);
}

TEST(Outer, RejectsBadModulus) {
  BoundarySamples s{CVec::Ones(16)};
  s.values[3] = -1.0;
  EXPECT_THROW(outer_from_modulus(s), Error);
  s.values[3] = 0.0;
  EXPECT_THROW(outer_from_modulus(s), Error);
  EXPECT_THROW(outer_from_modulus(BoundarySamples{CVec::Ones(12)}), Error);
}

TEST(UV, ModuliOfExpPair) {
  const std::size_t M = 1024;
  const UVPair uv = uv_pair(exp_series(64), M);
  const BoundarySamples ub = to_boundary(uv.u, M), vb = to_boundary(uv.v.coef(), M);
  for (std::size_t j = 0; j < M; j += 7) {
    const cplx z = BoundarySamples::grid_point(j, M);
    const double f = std::abs(std::exp(z));
    EXPECT_NEAR(std::abs(ub.values[static_cast<Eigen::Index>(j)]), std::min(1.0, f), 1e-6);
    EXPECT_NEAR(std::abs(vb.values[static_cast<Eigen::Index>(j)]), std::min(1.0, 1.0 / f), 1e-6);
  }
  EXPECT_LE(uv.u_sup, 1.0 + 1e-6);
  EXPECT_LE(uv.v_sup, 1.0 + 1e-6);
  EXPECT_THROW(uv_pair(CoefSeries(4)), Error);
}

TEST(PolyFactor, SplitsRootsAtTheCircle) {
  const std::vector<cplx> roots = {0.5, 2.0, cplx(0.0, -0.4), cplx(1.5, 1.0), 0.0};
  const auto c = oracle::poly_from_roots(roots);
  CoefSeries p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = 3.0 * c[k];
  const PolyFactorization f = poly_inner_outer(p);
  EXPECT_EQ(f.inner.blaschke().degree(), 3u);
  for (std::size_t j = 0; j < 64; ++j) {
    const cplx z = 0.95 * BoundarySamples::grid_point(j, 64);
    EXPECT_NEAR(std::abs(f.inner(z) * eval_poly(f.outer.coeffs(), z) - 3.0 * oracle::poly(c, z)), 0.0, 1e-10);
  }
  // the outer part keeps no zeros in the disk
  for (const cplx& r : polynomial_roots(f.outer).roots) EXPECT_GE(std::abs(r), 1.0 - 1e-9);
}

TEST(PolyFactor, PlainExample) {
  // 1 - 2.5 z + z^2 = (z - 1/2)(z - 2)
  const PolyFactorization f = poly_inner_outer(CoefSeries{1.0, -2.5, 1.0});
  ASSERT_EQ(f.inner.blaschke().degree(), 1u);
  EXPECT_NEAR(std::abs(f.inner.blaschke().zeros()[0] - 0.5), 0.0, 1e-12);
  EXPECT_THROW(poly_inner_outer(CoefSeries(3)), Error);
}

TEST(Gcd, MatchesMultisetOracle) {
  std::mt19937_64 rng(11);
  std::vector<cplx> pool;
  for (int k = 0; k < 5; ++k) pool.push_back(std::polar(0.2 + 0.15 * k, 1.3 * k));
  std::uniform_int_distribution<int> pick(0, 4), len(0, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> la, lb;
    for (int i = len(rng); i > 0; --i) la.push_back(pick(rng));
    for (int i = len(rng); i > 0; --i) lb.push_back(pick(rng));
    std::vector<cplx> za, zb;
    for (int i : la) za.push_back(pool[static_cast<std::size_t>(i)]);
    for (int i : lb) zb.push_back(pool[static_cast<std::size_t>(i)]);
    const InnerFunction a = InnerFunction::from_zeros(za), b = InnerFunction::from_zeros(zb);
    const InnerFunction g = inner_gcd(a, b);
    std::map<int, int> got;
    for (const cplx& z : g.blaschke().zeros())
      for (int k = 0; k < 5; ++k)
        if (z == pool[static_cast<std::size_t>(k)]) ++got[k];
    EXPECT_EQ(got, oracle::gcd_counts(la, lb));
    EXPECT_TRUE(inner_divides(g, a));
    EXPECT_TRUE(inner_divides(g, b));
  }
}

TEST(Gcd, SingularAtomsTakeTheSmallerMass) {
  const InnerFunction a(BlaschkeProduct({0.5}), SingularInner({{1.0, 2.0}, {kI, 1.0}}));
  const InnerFunction b(BlaschkeProduct({0.5, 0.5}), SingularInner({{1.0, 0.5}}));
  const InnerFunction g = inner_gcd(a, b);
  EXPECT_EQ(g.blaschke().degree(), 1u);
  ASSERT_EQ(g.singular().atoms().size(), 1u);
  EXPECT_DOUBLE_EQ(g.singular().atoms()[0].mass, 0.5);
  EXPECT_FALSE(inner_divides(a, b));
  EXPECT_TRUE(inner_divides(InnerFunction::from_zeros({0.5}), b));
  EXPECT_FALSE(inner_divides(InnerFunction::from_zeros({0.5, 0.5, 0.5}), b));
}

TEST(Inner, ProductMultipliesSeries) {
  const InnerFunction a = InnerFunction::from_zeros({0.3}), b = InnerFunction::from_atoms({{1.0, 0.2}});
  const InnerFunction ab = a * b;
  const CoefSeries s = series_multiply(a.series(300), b.series(300), 300);
  EXPECT_LE((ab.series(300).coeffs() - s.coeffs()).norm(), 1e-12);
}
