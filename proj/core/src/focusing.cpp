#include "aet/focusing.hpp"

#include "aet/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace aet {
namespace {

double xlogx(double x) {
  const double a = std::abs(x);
  return a > 0.0 ? x * std::log(a) : 0.0;
}

// Weights of the principal-value log kernel integrated against piecewise
// linear data on the uniform radius grid.
double log_weight(int j) { return xlogx(j + 1.0) - 2.0 * xlogx(j) + xlogx(j - 1.0); }

// Filtered profile F(t_k) for one transducer.
std::vector<double> filter_line(const double* data, const TransducerArray& array,
                                const std::vector<double>& kernel) {
  const int L = array.radii;
  const double dt = array.radius_step();
  std::vector<double> qp(L);
  std::vector<double> q(L, 0.0);
  std::vector<double> h(L);
  for (int l = 0; l < L; ++l) qp[l] = std::max(array.radius(l), array.width) * data[l];
  for (int l = 1; l < L; ++l) q[l] = q[l - 1] + 0.5 * dt * (qp[l - 1] + qp[l]);
  for (int l = 0; l < L; ++l) h[l] = array.radius(l) * qp[l] - q[l];
  std::vector<double> f(L, 0.0);
  for (int k = 1; k < L; ++k) {
    const double* row = kernel.data() + static_cast<std::size_t>(k) * L;
    double acc = 0.0;
    for (int l = 0; l < L; ++l) acc += row[l] * h[l];
    f[k] = -acc / array.radius(k);
  }
  return f;
}

}  // namespace

FocusedField focus(const Sinogram& s, const Grid& grid, bool restore_baseline) {
  const TransducerArray& array = s.geometry;
  array.validate();
  if (grid.dim() != 2) throw std::invalid_argument("focusing reconstructs 2D fields");
  if (s.values.size() != static_cast<std::size_t>(array.transducers) * array.radii) {
    throw std::invalid_argument("sinogram size disagrees with its geometry");
  }
  const double mask_radius = array.circle_radius - array.width;
  if (!(mask_radius > std::sqrt(2.0))) {
    throw std::invalid_argument("transducer circle minus front width does not enclose the square");
  }
  const int L = array.radii;
  const int P = array.transducers;

  std::vector<double> kernel(static_cast<std::size_t>(L) * L);
  for (int k = 0; k < L; ++k)
    for (int l = 0; l < L; ++l) kernel[static_cast<std::size_t>(k) * L + l] = log_weight(l - k) - log_weight(l + k);

  std::vector<std::vector<double>> filtered(P);
  parallel_for(static_cast<std::size_t>(P), [&](std::size_t m) {
    filtered[m] = filter_line(s.values.data() + m * L, array, kernel);
  });

  const double dt = array.radius_step();
  const double baseline = restore_baseline && s.pair[0] == s.pair[1] ? 1.0 : 0.0;
  ScalarField out(grid);
  const int n = grid.n();
  std::vector<std::array<double, 3>> centers(P);
  for (int m = 0; m < P; ++m) centers[m] = array.center(m);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    for (int col = 0; col < n; ++col) {
      const std::size_t i = grid.index(static_cast<int>(row), col);
      const auto x = grid.point(i);
      if (std::hypot(x[0], x[1]) >= mask_radius) {
        out[i] = baseline;
        continue;
      }
      double acc = 0.0;
      for (int m = 0; m < P; ++m) {
        const double d = std::hypot(x[0] - centers[m][0], x[1] - centers[m][1]);
        const double u = d / dt;
        const int l = static_cast<int>(u);
        if (l >= L - 1) continue;
        const double frac = u - l;
        acc += (1.0 - frac) * filtered[m][l] + frac * filtered[m][l + 1];
      }
      out[i] = acc / P;
    }
  });

  FocusedField f;
  f.field = std::move(out);
  f.pair = s.pair;
  f.source = s.kind == SinogramKind::Physical ? "physical" : "linearized";
  return f;
}

ScalarField synthesize_delta(const std::array<double, 3>& y, const TransducerArray& array, const Grid& grid) {
  if (std::abs(y[0]) >= 1.0 || std::abs(y[1]) >= 1.0) throw std::invalid_argument("focus point must lie inside the square");
  // A point source has no smoothness of its own; narrower fronts alias in t
  // and leave oscillating tails in the backprojection.
  TransducerArray geometry = array;
  geometry.width = std::max(array.width, 6.0 * array.radius_step());
  Sinogram s = make_sinogram(geometry, {1, 2}, SinogramKind::Linearized);
  const double w = geometry.width;
  for (int m = 0; m < array.transducers; ++m) {
    const auto z = array.center(m);
    const double d = std::hypot(y[0] - z[0], y[1] - z[1]);
    for (int l = 0; l < array.radii; ++l) {
      const double t = array.radius(l);
      s.at(m, l) = mollifier_derivative(t - d, w) / (2.0 * std::numbers::pi * std::max(t, w));
    }
  }
  return focus(s, grid, false).field;
}

}  // namespace aet
