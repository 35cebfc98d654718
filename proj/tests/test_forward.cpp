#include "aet/forward.hpp"
#include "aet/metrics.hpp"
#include "aet/phantom.hpp"
#include "aet/spectral.hpp"
#include "fd_oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace aet;

namespace {

ScalarField bump_sigma(const Grid& g, double amp) {
  return sample(g, [amp](auto x) {
    const double r = std::hypot(x[0] - 0.1, x[1] + 0.2);
    return 1.0 + amp * smoothed_profile(r, 0.05, 0.5);
  });
}

ScalarField coordinate(const Grid& g, int axis) {
  return sample(g, [axis](auto x) { return x[axis]; });
}

}  // namespace

TEST(SolvePotential, IdentityConductivityGivesCoordinate) {
  for (int dim : {2, 3}) {
    Grid g(dim, dim == 2 ? 65 : 17);
    for (int j = 1; j <= dim; ++j) {
      auto sol = solve_potential(ScalarField(g, 1.0), {j});
      EXPECT_EQ(max_abs_diff(sol.u, coordinate(g, j - 1)), 0.0);
      EXPECT_EQ(sol.report.iterations, 0);
    }
  }
}

TEST(SolvePotential, MatchesFiniteVolumeOracle) {
  Grid fine(2, 129);
  Grid coarse(2, 65);
  auto spec = builtin_phantom("table1-2d");
  auto sol = solve_potential(rasterize(spec, fine, PhantomOutput::Sigma), {1});
  auto fd = oracle::fd_neumann_potential(rasterize(spec, coarse, PhantomOutput::Sigma), 1);
  const double err = rel_l2(restrict_to(sol.u, coarse), fd);
  RecordProperty("rel_l2", std::to_string(err));
  EXPECT_LT(err, 1e-2);
  EXPECT_LT(std::abs(mean(sol.u)), 1e-12);
}

// On the coarse grid itself the finite-volume solution is the less accurate
// one: compare both against a spectral solve on n=257.
TEST(SolvePotential, SpectralBeatsFiniteVolumeOnSameGrid) {
  Grid coarse(2, 65);
  auto spec = builtin_phantom("table1-2d");
  auto ref = restrict_to(solve_potential(rasterize(spec, Grid(2, 257), PhantomOutput::Sigma), {1}).u, coarse);
  auto sigma = rasterize(spec, coarse, PhantomOutput::Sigma);
  auto sp = solve_potential(sigma, {1}).u;
  auto fd = oracle::fd_neumann_potential(sigma, 1);
  EXPECT_LT(rel_l2(sp, ref), rel_l2(fd, ref));
  EXPECT_LT(rel_l2(sp, fd), 2e-2);
}

TEST(SolvePotential, SmallContrastMatchesLinearization) {
  Grid g(2, 129);
  auto sigma = bump_sigma(g, 0.01);
  auto sol = solve_potential(sigma, {1});
  auto lin = poisson_neumann(-1.0 * spectral_derivative(sigma, 0));
  EXPECT_LT(rel_l2(sol.u - coordinate(g, 0), lin), 5e-2);
}

TEST(SolvePotential, ResidualMonotoneAndWithinTolerance) {
  Grid g(2, 129);
  auto sigma = rasterize(builtin_phantom("table1-2d"), g, PhantomOutput::Sigma);
  for (int j : {1, 2}) {
    auto sol = solve_potential(sigma, {j}, {1e-10, 500});
    EXPECT_TRUE(sol.report.monotone);
    EXPECT_LE(sol.report.residual, 1e-10);
    EXPECT_GT(sol.report.iterations, 0);
  }
}

TEST(SolvePotential, Errors) {
  Grid g(2, 33);
  ScalarField bad(g, 1.0);
  bad[g.index(16, 16)] = -0.5;
  EXPECT_THROW(solve_potential(bad, {1}), std::invalid_argument);
  ScalarField edge(g, 1.0);
  edge[g.index(1, 16)] = 1.1;
  EXPECT_THROW(solve_potential(edge, {1}), std::invalid_argument);
  auto sigma = rasterize(builtin_phantom("table1-2d"), g, PhantomOutput::Sigma);
  EXPECT_THROW(solve_potential(sigma, {1}, {1e-14, 1}), NumericError);
  EXPECT_THROW(solve_potential(sigma, {3}), std::out_of_range);
}

TEST(PowerDensity, IdentityConductivity) {
  Grid g(2, 65);
  ScalarField one(g, 1.0);
  auto u1 = solve_potential(one, {1});
  auto u2 = solve_potential(one, {2});
  auto m11 = power_density(one, u1, u1);
  auto m12 = power_density(one, u1, u2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(m11[i], 1.0, 1e-10);
    EXPECT_NEAR(m12[i], 0.0, 1e-10);
  }
}

TEST(PowerDensity, SymmetricAndNonNegative) {
  Grid g(2, 129);
  auto sigma = rasterize(builtin_phantom("table1-2d"), g, PhantomOutput::Sigma);
  auto u1 = solve_potential(sigma, {1});
  auto u2 = solve_potential(sigma, {2});
  auto a = power_density(sigma, u1, u2);
  auto b = power_density(sigma, u2, u1);
  for (std::size_t i = 0; i < g.size(); ++i) ASSERT_EQ(a[i], b[i]);
  EXPECT_GE(power_density(sigma, u1, u1).min(), 0.0);
}

TEST(BoundaryFunctional, Examples) {
  Grid g(2, 65);
  EXPECT_NEAR(boundary_functional(coordinate(g, 0), {1}), 4.0, 1e-12);
  EXPECT_NEAR(boundary_functional(coordinate(g, 1), {1}), 0.0, 1e-12);
  auto sq = sample(g, [](auto x) { return x[0] * x[0]; });
  EXPECT_NEAR(boundary_functional(sq, {1}), 0.0, 1e-12);
  EXPECT_NEAR(boundary_functional(sq, {2}), 0.0, 1e-12);
  Grid g3(3, 17);
  EXPECT_NEAR(boundary_functional(coordinate(g3, 2), {3}), 8.0, 1e-12);
}

// Reciprocity holds up to the face quadrature, which converges spectrally
// once the phantom's transition annulus is resolved.
TEST(BoundaryFunctional, Reciprocity) {
  auto spec = builtin_phantom("table1-2d");
  double prev = 0.0;
  for (int n : {129, 257, 513}) {
    auto sigma = rasterize(spec, Grid(2, n), PhantomOutput::Sigma);
    auto u1 = solve_potential(sigma, {1});
    auto u2 = solve_potential(sigma, {2});
    const double a = boundary_functional(u1.u, {2});
    const double b = boundary_functional(u2.u, {1});
    const double rel = std::abs(a - b) / std::abs(a);
    if (prev > 0.0) EXPECT_LT(rel, prev / 4);
    prev = rel;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Conservation, NetBoundaryFluxVanishes) {
  Grid g(2, 129);
  auto sigma = rasterize(builtin_phantom("table1-2d"), g, PhantomOutput::Sigma);
  auto sol = solve_potential(sigma, {1});
  auto grad = potential_gradient(sol);
  // sigma = 1 on the boundary; sum of outward normal derivative over faces.
  const int n = g.n();
  const double h = g.spacing();
  double flux = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
    flux += w * (grad[0][g.index(n - 1, k)] - grad[0][g.index(0, k)]);
    flux += w * (grad[1][g.index(k, n - 1)] - grad[1][g.index(k, 0)]);
  }
  EXPECT_NEAR(flux, 0.0, 1e-6);
}
