#include "aet/finite_diff.hpp"

#include <stdexcept>

namespace aet {

ScalarField fd_derivative(const ScalarField& f, int axis, int order) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw std::out_of_range("derivative axis out of range");
  if (order != 1 && order != 2) throw std::invalid_argument("finite difference order must be 1 or 2");

  const int n = g.n();
  const double h = g.spacing();
  const std::size_t outer = g.outer(axis);
  const std::size_t inner = g.inner(axis);
  const double c1 = 1.0 / (2.0 * h);
  const double c2 = 1.0 / (h * h);
  ScalarField out(g);
  const double* in = f.data();
  double* res = out.data();

  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      auto at = [&](int k) { return in[base + k * inner]; };
      auto put = [&](int k, double v) { res[base + k * inner] = v; };
      if (order == 1) {
        put(0, c1 * (-3.0 * at(0) + 4.0 * at(1) - at(2)));
        for (int k = 1; k < n - 1; ++k) put(k, c1 * (at(k + 1) - at(k - 1)));
        put(n - 1, c1 * (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)));
      } else {
        put(0, c2 * (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)));
        for (int k = 1; k < n - 1; ++k) put(k, c2 * (at(k + 1) - 2.0 * at(k) + at(k - 1)));
        put(n - 1, c2 * (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)));
      }
    }
  }
  return out;
}

ScalarField fd_mixed(const ScalarField& f, int a, int b) {
  if (a == b) return fd_derivative(f, a, 2);
  return fd_derivative(fd_derivative(f, a, 1), b, 1);
}

}  // namespace aet
