#include "aet/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace aet {

double l2_norm(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s * f.grid().cell_volume());
}

double rel_l2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rel_l2: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    num += d * d;
    den += b[i] * b[i];
  }
  if (den == 0.0) throw NumericError("rel_l2: reference has zero norm");
  return std::sqrt(num / den);
}

double rel_l2(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "rel_l2");
  return rel_l2(a.values(), b.values());
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace aet
