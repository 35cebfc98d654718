#include "aet/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

namespace aet {
namespace detail {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (grid, axis, extension) and kept for
// the life of the process.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& grid, int axis, Extension ext) {
    const auto key = std::make_tuple(grid.dim(), grid.n(), axis, ext == Extension::Even);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = make_plan(grid, axis, ext);
    if (plan == nullptr) throw NumericError("FFTW failed to create a transform plan");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  static fftw_plan make_plan(const Grid& grid, int axis, Extension ext) {
    const int len = ext == Extension::Even ? grid.n() : grid.n() - 2;
    const fftw_r2r_kind kind = ext == Extension::Even ? FFTW_REDFT00 : FFTW_RODFT00;
    std::vector<double> scratch(grid.size());
    double* base = scratch.data();
    std::vector<fftw_iodim> dims;
    std::vector<fftw_iodim> loops;
    std::vector<fftw_r2r_kind> kinds;
    for (int a = 0; a < grid.dim(); ++a) {
      const int s = static_cast<int>(grid.stride(a));
      if (axis < 0 || a == axis) {
        dims.push_back({len, s, s});
        kinds.push_back(kind);
        if (ext == Extension::Odd) base += s;
      } else {
        loops.push_back({grid.n(), s, s});
      }
    }
    return fftw_plan_guru_r2r(static_cast<int>(dims.size()), dims.data(), static_cast<int>(loops.size()),
                              loops.empty() ? nullptr : loops.data(), base, base, kinds.data(),
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int, bool>, fftw_plan> plans_;
};

double* offset_for(double* data, const Grid& grid, int axis, Extension ext) {
  if (ext == Extension::Even) return data;
  if (axis >= 0) return data + grid.stride(axis);
  std::size_t off = 0;
  for (int a = 0; a < grid.dim(); ++a) off += grid.stride(a);
  return data + off;
}

// Multiplies every node by factor[index along axis].
void scale_along(double* data, const Grid& grid, int axis, const std::vector<double>& factor) {
  const std::size_t outer = grid.outer(axis);
  const std::size_t inner = grid.inner(axis);
  const int n = grid.n();
  for (std::size_t o = 0; o < outer; ++o) {
    for (int k = 0; k < n; ++k) {
      double* line = data + (o * n + k) * inner;
      const double f = factor[k];
      for (std::size_t i = 0; i < inner; ++i) line[i] *= f;
    }
  }
}

// Divides each coefficient by the sum of per-axis eigenvalues; zero sums give 0.
void divide_by_symbol(double* data, const Grid& grid, const std::vector<double>& mu, double scale) {
  const int n = grid.n();
  if (grid.dim() == 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double lam = mu[i] + mu[j];
        double& v = data[static_cast<std::size_t>(i) * n + j];
        v = lam == 0.0 ? 0.0 : v * scale / lam;
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double lam = mu[i] + mu[j] + mu[k];
          double& v = data[(static_cast<std::size_t>(i) * n + j) * n + k];
          v = lam == 0.0 ? 0.0 : v * scale / lam;
        }
      }
    }
  }
}

void multiply_by_symbol(double* data, const Grid& grid, const std::vector<double>& mu, double scale) {
  const int n = grid.n();
  const std::size_t total = grid.size();
  const std::size_t s0 = grid.stride(0);
  for (std::size_t lin = 0; lin < total; ++lin) {
    const int i = static_cast<int>(lin / s0);
    const std::size_t rest = lin % s0;
    double lam = mu[i];
    if (grid.dim() == 2) {
      lam += mu[rest];
    } else {
      lam += mu[rest / n] + mu[rest % n];
    }
    data[lin] *= lam * scale;
  }
}

std::vector<double> wave_squares(int n, bool drop_nyquist) {
  const int big_n = n - 1;
  std::vector<double> mu(n);
  for (int k = 0; k < n; ++k) {
    const double kk = k * std::numbers::pi / 2.0;
    mu[k] = kk * kk;
  }
  if (drop_nyquist) mu[big_n] = 0.0;
  return mu;
}

void zero_faces(double* data, const Grid& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.layer(i) == 0) data[i] = 0.0;
  }
}

}  // namespace

void transform_axis(double* data, const Grid& grid, int axis, Extension ext) {
  if (axis < 0 || axis >= grid.dim()) throw std::out_of_range("axis out of range");
  fftw_plan plan = PlanCache::instance().get(grid, axis, ext);
  double* p = offset_for(data, grid, axis, ext);
  fftw_execute_r2r(plan, p, p);
}

void transform_all(double* data, const Grid& grid, Extension ext) {
  fftw_plan plan = PlanCache::instance().get(grid, -1, ext);
  double* p = offset_for(data, grid, -1, ext);
  fftw_execute_r2r(plan, p, p);
}

void apply_matched_neumann_inverse(const double* in, double* out, const Grid& grid) {
  if (in != out) std::copy(in, in + grid.size(), out);
  transform_all(out, grid, Extension::Even);
  const double norm = std::pow(2.0 * (grid.n() - 1), grid.dim());
  divide_by_symbol(out, grid, wave_squares(grid.n(), true), 1.0 / norm);
  transform_all(out, grid, Extension::Even);
}

void cosine_derivative_inplace(double* data, const Grid& grid, int axis) {
  const int n = grid.n();
  const int big_n = n - 1;
  transform_axis(data, grid, axis, Extension::Even);
  std::vector<double> factor(n, 0.0);
  for (int k = 1; k < big_n; ++k) factor[k] = -k * std::numbers::pi / (4.0 * big_n);
  scale_along(data, grid, axis, factor);
  transform_axis(data, grid, axis, Extension::Odd);
}

void sine_derivative_inplace(double* data, const Grid& grid, int axis) {
  const int n = grid.n();
  const int big_n = n - 1;
  std::vector<double> factor(n, 0.0);
  for (int k = 1; k < big_n; ++k) factor[k] = 1.0;
  scale_along(data, grid, axis, factor);  // drop face values
  transform_axis(data, grid, axis, Extension::Odd);
  for (int k = 1; k < big_n; ++k) factor[k] = k * std::numbers::pi / (4.0 * big_n);
  scale_along(data, grid, axis, factor);
  transform_axis(data, grid, axis, Extension::Even);
}

}  // namespace detail

using detail::Extension;

ScalarField spectral_derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw std::out_of_range("derivative axis out of range");
  ScalarField out = f;
  detail::cosine_derivative_inplace(out.data(), f.grid(), axis);
  return out;
}

ScalarField sine_derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw std::out_of_range("derivative axis out of range");
  ScalarField out = f;
  detail::sine_derivative_inplace(out.data(), f.grid(), axis);
  return out;
}

ScalarField poisson_dirichlet(const ScalarField& rhs) {
  const Grid& g = rhs.grid();
  ScalarField u = rhs;
  detail::transform_all(u.data(), g, Extension::Odd);
  const double norm = std::pow(2.0 * (g.n() - 1), g.dim());
  // Only interior entries carry sine coefficients; faces are cleared below.
  detail::divide_by_symbol(u.data(), g, detail::wave_squares(g.n(), false), -1.0 / norm);
  detail::transform_all(u.data(), g, Extension::Odd);
  detail::zero_faces(u.data(), g);
  return u;
}

ScalarField poisson_neumann(const ScalarField& rhs) {
  const Grid& g = rhs.grid();
  ScalarField u = rhs;
  detail::transform_all(u.data(), g, Extension::Even);
  const double norm = std::pow(2.0 * (g.n() - 1), g.dim());
  detail::divide_by_symbol(u.data(), g, detail::wave_squares(g.n(), false), -1.0 / norm);
  detail::transform_all(u.data(), g, Extension::Even);
  return u;
}

ScalarField sine_laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField u = f;
  detail::zero_faces(u.data(), g);
  detail::transform_all(u.data(), g, Extension::Odd);
  const double norm = std::pow(2.0 * (g.n() - 1), g.dim());
  detail::multiply_by_symbol(u.data(), g, detail::wave_squares(g.n(), false), -1.0 / norm);
  detail::transform_all(u.data(), g, Extension::Odd);
  detail::zero_faces(u.data(), g);
  return u;
}

}  // namespace aet
