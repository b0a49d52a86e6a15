// Builds the 2x1 inner column from the preset catalog, forms S(Theta) at
// N = 128 and prints a few of the quantities the CLI reports.

#include <cstdio>

#include "hardylab/hardylab.hpp"

using namespace hardylab;

int main() {
  const Theta th = paper_example_theta();
  std::printf("inner column deviation: %.3g\n", check_inner_column(th, 1024).max_deviation);

  const ThetaModel m = theta_model(th, 128);
  std::printf("dim H(Theta)_N = %zu (exact %zu, trusted %zu)\n", m.basis.dim(), m.basis.exact_dim, m.T.trust);

  const EigenvectorField F(m.T, m.f0);
  const CVec a = F(0.0), b = F(0.5);
  std::printf("|<f(0), f(1/2)>| = %.3g\n", std::abs(a.dot(b)));

  const FredholmReport idx = theta_fredholm(th, 0.3, {64, 128});
  if (idx.index) std::printf("index(0.3 I - S(Theta)) = %ld\n", *idx.index);

  const CoronaResult c = corona_similarity(th);
  if (c.feasible) std::printf("corona pair found at degree %d, residual %.3g\n", c.degree, c.boundary_residual);
  return 0;
}
