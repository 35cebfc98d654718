#include "aet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aet {

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (n < 9) {
    throw std::invalid_argument("grid needs at least 9 nodes per axis, got " + std::to_string(n));
  }
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim_; ++a) s *= static_cast<std::size_t>(n_);
  return s;
}

std::size_t Grid::stride(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::out_of_range("axis out of range");
  std::size_t s = 1;
  for (int a = axis + 1; a < dim_; ++a) s *= static_cast<std::size_t>(n_);
  return s;
}

std::size_t Grid::outer(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::out_of_range("axis out of range");
  std::size_t s = 1;
  for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(n_);
  return s;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::array<int, 3> Grid::unravel(std::size_t linear) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(linear % n_);
    linear /= n_;
  }
  return idx;
}

std::array<double, 3> Grid::point(std::size_t linear) const {
  const auto idx = unravel(linear);
  std::array<double, 3> p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = coord(idx[a]);
  return p;
}

double Grid::trapezoid_weight(std::size_t linear) const {
  const auto idx = unravel(linear);
  double w = cell_volume();
  for (int a = 0; a < dim_; ++a) {
    if (idx[a] == 0 || idx[a] == n_ - 1) w *= 0.5;
  }
  return w;
}

std::vector<double> Grid::trapezoid_weights() const {
  std::vector<double> line(n_, spacing());
  line.front() *= 0.5;
  line.back() *= 0.5;
  std::vector<double> w(size());
  if (dim_ == 2) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) w[index(i, j)] = line[i] * line[j];
  } else {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) w[index(i, j, k)] = line[i] * line[j] * line[k];
  }
  return w;
}

int Grid::layer(std::size_t linear) const {
  const auto idx = unravel(linear);
  int l = n_;
  for (int a = 0; a < dim_; ++a) l = std::min({l, idx[a], n_ - 1 - idx[a]});
  return l;
}

ScalarField::ScalarField(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field value count does not match grid size");
  }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise product");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

VectorField::VectorField(const Grid& grid) : grid_(grid) {
  for (int a = 0; a < grid.dim(); ++a) components_.emplace_back(grid);
}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("vector field needs components");
  grid_ = components_.front().grid();
  for (const auto& c : components_) require_same_grid(grid_, c.grid(), "vector field components");
  if (static_cast<int>(components_.size()) != grid_.dim()) {
    throw std::invalid_argument("vector field needs one component per axis");
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string("grid mismatch in ") + what + ": " + std::to_string(a.dim()) +
                                "D n=" + std::to_string(a.n()) + " vs " + std::to_string(b.dim()) +
                                "D n=" + std::to_string(b.n()));
  }
}

ScalarField restrict_to(const ScalarField& fine, const Grid& coarse) {
  const Grid& g = fine.grid();
  if (g.dim() != coarse.dim()) throw std::invalid_argument("restriction between grids of different dimension");
  if (coarse.n() > g.n() || (g.n() - 1) % (coarse.n() - 1) != 0) {
    throw std::invalid_argument("coarse grid n=" + std::to_string(coarse.n()) +
                                " is not a node subset of fine grid n=" + std::to_string(g.n()));
  }
  const int step = (g.n() - 1) / (coarse.n() - 1);
  ScalarField out(coarse);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const auto idx = coarse.unravel(i);
    std::size_t src = 0;
    for (int a = 0; a < g.dim(); ++a) src = src * g.n() + static_cast<std::size_t>(idx[a]) * step;
    out[i] = fine[src];
  }
  return out;
}

double integrate(const ScalarField& f) {
  const auto w = f.grid().trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

double mean(const ScalarField& f) { return integrate(f) / std::pow(2.0, f.grid().dim()); }

void pin_boundary(ScalarField& f, int layers, double value) {
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (g.layer(i) < layers) f[i] = value;
  }
}

}  // namespace aet
