#include "aet/field_io.hpp"
#include "aet/finite_diff.hpp"
#include "aet/metrics.hpp"
#include "aet/phantom.hpp"
#include "aet/spectral.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace aet;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double trapezoid_dot(const ScalarField& a, const ScalarField& b) {
  const auto w = a.grid().trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

ScalarField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField f(g);
  for (auto& v : f.values()) v = dist(rng);
  return f;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("aet_test_" + name);
}

}  // namespace

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid(1, 33), std::invalid_argument);
  EXPECT_THROW(Grid(2, 8), std::invalid_argument);
  Grid g(2, 129);
  EXPECT_DOUBLE_EQ(g.spacing() * (g.n() - 1), 2.0);
  EXPECT_DOUBLE_EQ(g.coord(0), -1.0);
  EXPECT_DOUBLE_EQ(g.coord(128), 1.0);
}

TEST(Grid, MeanOfConstantIsConstant) {
  Grid g(3, 17);
  EXPECT_NEAR(mean(ScalarField(g, 2.5)), 2.5, 1e-14);
}

TEST(SpectralDerivative, ConstantGivesZero) {
  Grid g(2, 65);
  EXPECT_LT(max_abs(spectral_derivative(ScalarField(g, 1.0), 0)), 1e-12);
  EXPECT_LT(max_abs(spectral_derivative(ScalarField(g, 1.0), 1)), 1e-12);
}

TEST(SpectralDerivative, CosineModeIsExact) {
  Grid g(2, 129);
  auto f = sample(g, [](auto x) { return std::cos(kPi * (x[0] + 1) / 2); });
  auto expect = sample(g, [](auto x) { return -(kPi / 2) * std::sin(kPi * (x[0] + 1) / 2); });
  EXPECT_LT(rel_l2(spectral_derivative(f, 0), expect), 1e-10);
  EXPECT_LT(max_abs(spectral_derivative(f, 1)), 1e-12);
}

TEST(SpectralDerivative, HigherModesAlongLastAxis3D) {
  Grid g(3, 33);
  auto f = sample(g, [](auto x) { return std::cos(5 * kPi * (x[2] + 1) / 2) * std::cos(kPi * (x[0] + 1)); });
  auto expect = sample(g, [](auto x) {
    return -(5 * kPi / 2) * std::sin(5 * kPi * (x[2] + 1) / 2) * std::cos(kPi * (x[0] + 1));
  });
  EXPECT_LT(rel_l2(spectral_derivative(f, 2), expect), 1e-10);
}

TEST(SpectralDerivative, RejectsBadAxis) {
  Grid g(2, 17);
  EXPECT_THROW(spectral_derivative(ScalarField(g), 2), std::out_of_range);
  EXPECT_THROW(sine_derivative(ScalarField(g), -1), std::out_of_range);
}

// The phantom's transition annulus is only a few cells wide at n=513, so the
// second-order stencil is the less accurate of the two; both are measured
// against a spectral derivative on the twice-refined grid.
TEST(SpectralDerivative, MatchesFiniteDifferencesOnPhantom) {
  auto spec = builtin_phantom("table1-2d");
  double gap_prev = 0.0;
  for (int n : {513, 1025}) {
    Grid g(2, n);
    auto f = rasterize(spec, g, PhantomOutput::LnSigma);
    auto ref = restrict_to(spectral_derivative(rasterize(spec, Grid(2, 2 * n - 1), PhantomOutput::LnSigma), 0), g);
    auto spectral = spectral_derivative(f, 0);
    auto fd = fd_derivative(f, 0, 1);
    EXPECT_LT(rel_l2(spectral, ref), rel_l2(fd, ref));
    const double gap = rel_l2(spectral, fd);
    RecordProperty("gap_n" + std::to_string(n), std::to_string(gap));
    if (gap_prev > 0.0) EXPECT_GT(gap_prev / gap, 2.5);
    gap_prev = gap;
  }
}

TEST(SineDerivative, SineModeIsExact) {
  Grid g(2, 65);
  auto f = sample(g, [](auto x) { return std::sin(3 * kPi * (x[1] + 1) / 2); });
  auto expect = sample(g, [](auto x) { return (3 * kPi / 2) * std::cos(3 * kPi * (x[1] + 1) / 2); });
  EXPECT_LT(rel_l2(sine_derivative(f, 1), expect), 1e-10);
}

TEST(SineDerivative, IsNegativeAdjointOfCosineDerivative) {
  for (int dim : {2, 3}) {
    Grid g(dim, dim == 2 ? 33 : 17);
    auto a = random_field(g, 1);
    auto b = random_field(g, 2);
    for (int axis = 0; axis < dim; ++axis) {
      const double lhs = trapezoid_dot(spectral_derivative(a, axis), b);
      const double rhs = -trapezoid_dot(a, sine_derivative(b, axis));
      EXPECT_NEAR(lhs, rhs, 1e-10 * (std::abs(lhs) + 1.0)) << "dim " << dim << " axis " << axis;
    }
  }
}

TEST(PoissonDirichlet, EigenfunctionExact2D) {
  Grid g(2, 129);
  auto mode = [](auto x) { return std::sin(kPi * (x[0] + 1) / 2) * std::sin(kPi * (x[1] + 1) / 2); };
  auto u = sample(g, mode);
  auto rhs = -(kPi * kPi / 2) * u;
  auto got = poisson_dirichlet(rhs);
  EXPECT_LT(max_abs_diff(got, u), 1e-12);
}

TEST(PoissonDirichlet, EigenfunctionExact3D) {
  Grid g(3, 65);
  auto u = sample(g, [](auto x) {
    return std::sin(kPi * (x[0] + 1) / 2) * std::sin(kPi * (x[1] + 1)) * std::sin(3 * kPi * (x[2] + 1) / 2);
  });
  auto rhs = -(kPi * kPi / 4) * (1 + 4 + 9) * u;
  EXPECT_LT(max_abs_diff(poisson_dirichlet(rhs), u), 1e-12);
}

TEST(PoissonDirichlet, ZeroRhsGivesZeroAndBoundaryIsZero) {
  Grid g(2, 33);
  EXPECT_EQ(max_abs(poisson_dirichlet(ScalarField(g))), 0.0);
  auto u = poisson_dirichlet(random_field(g, 3));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.layer(i) == 0) EXPECT_EQ(u[i], 0.0);
  }
}

TEST(PoissonDirichlet, InvertsSineLaplacian) {
  Grid g(2, 65);
  auto f = random_field(g, 4);
  pin_boundary(f, 1, 0.0);
  EXPECT_LT(rel_l2(poisson_dirichlet(sine_laplacian(f)), f), 1e-10);
}

namespace {

double dirichlet_fd_gap(int n) {
  Grid g(2, n);
  auto rhs = sample(g, [](auto x) { return std::exp(-8 * (x[0] * x[0] + x[1] * x[1])); });
  pin_boundary(rhs, 1, 0.0);

  const int m = n - 2;
  const double h2 = g.spacing() * g.spacing();
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd b(m * m);
  auto id = [m](int i, int j) { return i * m + j; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      trips.emplace_back(id(i, j), id(i, j), 4.0 / h2);
      if (i > 0) trips.emplace_back(id(i, j), id(i - 1, j), -1.0 / h2);
      if (i < m - 1) trips.emplace_back(id(i, j), id(i + 1, j), -1.0 / h2);
      if (j > 0) trips.emplace_back(id(i, j), id(i, j - 1), -1.0 / h2);
      if (j < m - 1) trips.emplace_back(id(i, j), id(i, j + 1), -1.0 / h2);
      b[id(i, j)] = -rhs[g.index(i + 1, j + 1)];
    }
  }
  Eigen::SparseMatrix<double> a(m * m, m * m);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  Eigen::VectorXd x = solver.solve(b);
  ScalarField fd(g);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) fd[g.index(i + 1, j + 1)] = x[id(i, j)];
  return rel_l2(poisson_dirichlet(rhs), fd);
}

}  // namespace

// The five-point solve carries an O(h^2) error of about 1.3e-3 at n=33; the
// gap must shrink at second order and drop below 1e-3 from n=65 on.
TEST(PoissonDirichlet, MatchesFiniteDifferenceSolve) {
  const double g33 = dirichlet_fd_gap(33);
  const double g65 = dirichlet_fd_gap(65);
  RecordProperty("gap_n33", std::to_string(g33));
  RecordProperty("gap_n65", std::to_string(g65));
  EXPECT_LT(g33, 2e-3);
  EXPECT_LT(g65, 1e-3);
  EXPECT_NEAR(g33 / g65, 4.0, 0.8);
}

TEST(PoissonNeumann, CosineEigenfunction) {
  Grid g(2, 129);
  auto u = sample(g, [](auto x) { return std::cos(kPi * (x[0] + 1) / 2); });
  auto rhs = -(kPi * kPi / 4) * u;
  EXPECT_LT(max_abs_diff(poisson_neumann(rhs), u), 1e-12);
}

TEST(PoissonNeumann, ConstantProjectsToZero) {
  Grid g(2, 33);
  EXPECT_LT(max_abs(poisson_neumann(ScalarField(g, 7.0))), 1e-12);
}

TEST(PoissonNeumann, MixedEigenmode2DAnd3D) {
  Grid g2(2, 129);
  auto u2 = sample(g2, [](auto x) { return std::cos(kPi * (x[0] + 1)) * std::cos(kPi * (x[1] + 1) / 2); });
  EXPECT_LT(max_abs_diff(poisson_neumann(-(kPi * kPi * 1.25) * u2), u2), 1e-12);

  Grid g3(3, 65);
  auto u3 = sample(g3, [](auto x) {
    return std::cos(kPi * (x[0] + 1) / 2) * std::cos(kPi * (x[1] + 1)) * std::cos(3 * kPi * (x[2] + 1) / 2);
  });
  EXPECT_LT(max_abs_diff(poisson_neumann(-(kPi * kPi / 4) * 14.0 * u3), u3), 1e-12);
}

TEST(PoissonNeumann, ZeroMeanAndZeroNormalDerivative) {
  Grid g(2, 129);
  auto rhs = sample(g, [](auto x) { return std::exp(-10 * ((x[0] - 0.2) * (x[0] - 0.2) + x[1] * x[1])); });
  auto u = poisson_neumann(rhs);
  EXPECT_LT(std::abs(mean(u)), 1e-12);
  auto dn = fd_derivative(u, 0, 1);
  double edge = 0.0;
  for (int k = 0; k < g.n(); ++k) edge = std::max({edge, std::abs(dn[g.index(0, k)]), std::abs(dn[g.index(128, k)])});
  EXPECT_LT(edge, 10 * g.spacing() * g.spacing() * max_abs(rhs) + 1e-12);
}

TEST(FiniteDiff, AffineAndQuadraticExact) {
  Grid g(2, 33);
  auto lin = sample(g, [](auto x) { return 3 * x[0] - 2 * x[1] + 0.5; });
  auto d0 = fd_derivative(lin, 0, 1);
  auto d1 = fd_derivative(lin, 1, 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(d0[i], 3.0, 1e-12);
    EXPECT_NEAR(d1[i], -2.0, 1e-12);
  }
  auto quad = sample(g, [](auto x) { return x[0] * x[0]; });
  auto dd = fd_derivative(quad, 0, 2);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(dd[i], 2.0, 1e-9);
  auto mixed = fd_mixed(sample(g, [](auto x) { return x[0] * x[1]; }), 0, 1);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(mixed[i], 1.0, 1e-12);
}

TEST(FiniteDiff, SecondOrderConvergence) {
  auto err = [](int n) {
    Grid g(2, n);
    auto f = sample(g, [](auto x) { return std::sin(2 * x[0] + x[1]); });
    auto exact = sample(g, [](auto x) { return 2 * std::cos(2 * x[0] + x[1]); });
    return l2_norm(fd_derivative(f, 0, 1) - exact);
  };
  const double ratio = err(129) / err(257);
  EXPECT_NEAR(ratio, 4.0, 0.8);
}

TEST(FiniteDiff, ValidatesArguments) {
  Grid g(2, 17);
  EXPECT_THROW(fd_derivative(ScalarField(g), 0, 3), std::invalid_argument);
  EXPECT_THROW(fd_derivative(ScalarField(g), 2, 1), std::out_of_range);
}

TEST(Metrics, RelL2Basics) {
  Grid g(2, 17);
  auto b = random_field(g, 5);
  EXPECT_EQ(rel_l2(b, b), 0.0);
  EXPECT_NEAR(rel_l2(1.5 * b, b), 0.5, 1e-15);
  auto e = random_field(g, 6);
  e *= 0.1 * l2_norm(b) / l2_norm(e);
  EXPECT_NEAR(rel_l2(b + e, b), 0.1, 1e-12);
  EXPECT_THROW(rel_l2(b, ScalarField(g)), NumericError);
}

TEST(FieldIo, RoundTripAndRejections) {
  Grid g(3, 9);
  auto f = random_field(g, 7);
  const auto path = temp_file("roundtrip.aetf");
  write_field(path, f);
  auto back = read_field(path);
  ASSERT_EQ(back.grid(), g);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(back[i], f[i]);

  {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(0);
    io.write("XETF", 4);
  }
  EXPECT_THROW(read_array(path), FormatError);

  write_field(path, f);
  {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(4);
    const char v2[4] = {2, 0, 0, 0};
    io.write(v2, 4);
  }
  EXPECT_THROW(read_array(path), FormatError);

  write_field(path, f);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
  EXPECT_THROW(read_array(path), FormatError);
  std::filesystem::remove(path);
}

TEST(FieldIo, MetadataRoundTrip) {
  const auto path = temp_file("meta.meta");
  Metadata m{{"pair", "1,2"}, {"kind", "physical"}, {"w", "0.0234"}};
  write_metadata(path, m);
  EXPECT_EQ(read_metadata(path), m);
  std::filesystem::remove(path);
}

TEST(Purity, InputsAreNotMutated) {
  Grid g(2, 33);
  const auto f = random_field(g, 8);
  const auto copy = f;
  (void)spectral_derivative(f, 0);
  (void)sine_derivative(f, 1);
  (void)poisson_dirichlet(f);
  (void)poisson_neumann(f);
  (void)fd_derivative(f, 0, 2);
  for (std::size_t i = 0; i < f.size(); ++i) ASSERT_EQ(f[i], copy[i]);
}
