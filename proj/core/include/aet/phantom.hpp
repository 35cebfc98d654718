#pragma once

#include "aet/grid.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace aet {

/// Distance used by a phantom element: Euclidean (ball) or max-norm (square
/// or cube, which gives the shape corners).
enum class Shape { Ball, Square };

struct SmoothedBall {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double r_out = 0.0;
  double r_in = 0.0;
  double alpha = 0.0;
  Shape shape = Shape::Ball;
};

/// ln sigma(x) = sum_j alpha_j h(dist(x, x_j), r_in_j, r_out_j).
struct PhantomSpec {
  int dim = 2;
  std::vector<SmoothedBall> balls;
};

enum class PhantomOutput { LnSigma, Sigma };

/// 1 on [0, r_in], 0 on [r_out, inf), C-infinity decay in between.
double smoothed_profile(double r, double r_in, double r_out);

/// "table1-2d", "table2-3d" or "corners-2d".
PhantomSpec builtin_phantom(std::string_view name);

/// Throws std::invalid_argument if radii are misordered or a support
/// reaches the cube boundary.
void validate(const PhantomSpec& spec);

double evaluate(const PhantomSpec& spec, const std::array<double, 3>& x);

ScalarField rasterize(const PhantomSpec& spec, const Grid& grid, PhantomOutput output);

/// Text format: one element per line, `x1 x2 [x3] r_out r_in alpha [ball|square]`,
/// `#` starts a comment.
PhantomSpec parse_phantom(std::string_view text, int dim);
PhantomSpec read_phantom(const std::filesystem::path& path, int dim);
std::string format_phantom(const PhantomSpec& spec);

}  // namespace aet
