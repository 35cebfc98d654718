#include "aet/export.hpp"
#include "aet/phantom.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aet;

TEST(Pgm, DegenerateWindowThrows) {
  ScalarField c(Grid(2, 9), 0.7);
  EXPECT_THROW(gray_levels(c), std::invalid_argument);
  EXPECT_THROW(gray_levels(c, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(gray_levels(c, {1.0, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(gray_levels(c, {0.0, 1.0}));
}

TEST(Pgm, RowZeroIsTop) {
  Grid g(2, 9);
  const auto f = sample(g, [](auto x) { return x[1]; });
  const auto px = gray_levels(f);
  for (int col = 0; col < 9; ++col) {
    EXPECT_EQ(px[col], 255);
    EXPECT_EQ(px[8 * 9 + col], 0);
    EXPECT_EQ(px[4 * 9 + col], 128);
  }
  const auto h = sample(g, [](auto x) { return x[0]; });
  const auto py = gray_levels(h);
  EXPECT_EQ(py[0], 0);
  EXPECT_EQ(py[8], 255);
}

// Rendering the lower tenth of the range saturates everything above it.
TEST(Pgm, LowerTenthWindow) {
  Grid g(2, 65);
  const auto f = sample(g, [](auto x) { return std::exp(-40.0 * (x[0] * x[0] + x[1] * x[1])); });
  const auto px = gray_levels(f, {0.0, 0.1 * f.max()});
  std::size_t saturated = 0, expected = 0;
  for (std::size_t i = 0; i < g.size(); ++i) expected += f[i] >= 0.1 * f.max();
  for (auto p : px) saturated += p == 255;
  EXPECT_EQ(saturated, expected);
  EXPECT_GT(saturated, 0u);
  EXPECT_LT(saturated, g.size());
}

TEST(Pgm, FileLayout) {
  const auto path = std::filesystem::temp_directory_path() / "aet_export_test.pgm";
  Grid g(2, 9);
  const auto f = sample(g, [](auto x) { return x[0] + 2.0 * x[1]; });
  write_pgm(path, f);
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string s = ss.str();
  ASSERT_EQ(s.rfind("P5\n9 9\n255\n", 0), 0u);
  const std::string body = s.substr(11);
  ASSERT_EQ(body.size(), 81u);
  const auto px = gray_levels(f);
  EXPECT_TRUE(std::equal(px.begin(), px.end(), reinterpret_cast<const unsigned char*>(body.data())));
  std::filesystem::remove(path);
}

TEST(Pgm, ThreeDimensionalPlanes) {
  Grid g(3, 9);
  const auto f = sample(g, [](auto x) { return x[2]; });
  EXPECT_THROW(gray_levels(f, {.plane = 0}), std::invalid_argument);  // x3 = 0 plane is constant
  const auto px = gray_levels(f, {.plane = 1});
  EXPECT_EQ(px[0], 255);
  EXPECT_EQ(px[8 * 9], 0);
}

TEST(Profile, CentralHorizontalCrossesDisks) {
  Grid g(2, 129);
  const auto ln = rasterize(builtin_phantom("table1-2d"), g, PhantomOutput::LnSigma);
  auto at = [](const std::vector<std::pair<double, double>>& p, double x) {
    for (const auto& [c, v] : p)
      if (std::abs(c - x) < 1e-9) return v;
    return 1e9;
  };
  const auto mid = profile(ln);
  ASSERT_EQ(mid.size(), 129u);
  EXPECT_DOUBLE_EQ(mid.front().first, -1.0);
  EXPECT_DOUBLE_EQ(mid.back().first, 1.0);
  EXPECT_NEAR(at(mid, -0.59375), -1.0, 1e-12);
  EXPECT_NEAR(at(mid, 0.59375), -1.0, 1e-12);
  EXPECT_NEAR(at(mid, 0.0), 0.0, 1e-12);
  const auto top = profile(ln, {ProfileKind::Axis, 0, 0.6});
  EXPECT_NEAR(at(top, -0.546875), 1.0, 1e-12);
  EXPECT_NEAR(at(top, 0.0), -1.0, 1e-12);
  EXPECT_NEAR(at(top, 0.59375), 1.0, 1e-12);
}

TEST(Profile, VerticalAndDiagonal) {
  Grid g(2, 9);
  const auto f = sample(g, [](auto x) { return x[0] + 10.0 * x[1]; });
  const auto v = profile(f, {ProfileKind::Axis, 1, 0.5});
  for (const auto& [c, val] : v) EXPECT_DOUBLE_EQ(val, 0.5 + 10.0 * c);
  const auto d = profile(f, {ProfileKind::Diagonal});
  for (const auto& [c, val] : d) EXPECT_NEAR(val, 11.0 * c, 1e-12);
  EXPECT_THROW(profile(f, {ProfileKind::Axis, 2}), std::out_of_range);
  EXPECT_THROW(profile(f, {ProfileKind::Axis, 0, 1.5}), std::out_of_range);
}

TEST(Profile, CsvFormat) {
  const std::string s = format_profile_csv({{-1.0, 0.5}, {0.0, -2.0}});
  EXPECT_EQ(s, "coordinate,value\n-1,0.5\n0,-2\n");
}
