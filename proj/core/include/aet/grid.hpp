#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed file, bad magic, size mismatch.
class FormatError : public Error {
public:
  using Error::Error;
};

/// Iterative solver or numeric pipeline failure.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Uniform node grid on the cube [-1,1]^dim with n nodes per axis.
///
/// Node k on any axis sits at -1 + k*h with h = 2/(n-1). Values are stored
/// row-major with the last axis fastest, axes ordered (x1, ..., x_dim).
class Grid {
public:
  Grid() = default;
  Grid(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double spacing() const { return 2.0 / (n_ - 1); }
  double coord(int k) const { return -1.0 + k * spacing(); }
  std::size_t size() const;

  /// Distance in the flat array between neighbours along `axis`.
  std::size_t stride(int axis) const;

  /// Product of extents before / after `axis`.
  std::size_t outer(int axis) const;
  std::size_t inner(int axis) const { return stride(axis); }

  /// Quadrature cell volume h^dim.
  double cell_volume() const;

  /// Trapezoid weight of a node (h^dim halved once per boundary coordinate).
  double trapezoid_weight(std::size_t linear) const;
  std::vector<double> trapezoid_weights() const;

  std::array<int, 3> unravel(std::size_t linear) const;
  std::size_t index(int i0, int i1) const { return static_cast<std::size_t>(i0) * n_ + i1; }
  std::size_t index(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * n_ + i1) * n_ + i2;
  }

  /// Coordinates of a node.
  std::array<double, 3> point(std::size_t linear) const;

  /// Number of outermost node layers a node sits within (0 = on the boundary).
  int layer(std::size_t linear) const;

  bool operator==(const Grid&) const = default;

private:
  int dim_ = 2;
  int n_ = 9;
};

/// Sampled function on a Grid.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  bool all_finite() const;
  double min() const;
  double max() const;

private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);

/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Fills a field from a function of the node coordinates.
template <class F>
ScalarField sample(const Grid& grid, F&& f) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = f(grid.point(i));
  }
  return out;
}

/// dim components sharing one grid.
class VectorField {
public:
  VectorField() = default;
  explicit VectorField(const Grid& grid);
  explicit VectorField(std::vector<ScalarField> components);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(components_.size()); }
  ScalarField& operator[](int axis) { return components_.at(axis); }
  const ScalarField& operator[](int axis) const { return components_.at(axis); }

private:
  Grid grid_;
  std::vector<ScalarField> components_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Node subsampling of a fine grid onto a coarse one; (fine.n-1) must be a
/// multiple of (coarse.n-1).
ScalarField restrict_to(const ScalarField& fine, const Grid& coarse);

/// Trapezoid-rule integral over the cube.
double integrate(const ScalarField& f);

/// Trapezoid-rule mean (integral divided by the cube volume).
double mean(const ScalarField& f);

/// Sets the `layers` outermost node layers to `value`.
void pin_boundary(ScalarField& f, int layers, double value);

}  // namespace aet
