#include "aet/recon2d.hpp"

#include "aet/finite_diff.hpp"
#include "aet/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace aet {
namespace {

void require_2d(const Grid& g, const char* what) {
  if (g.dim() != 2) throw std::invalid_argument(std::string(what) + " needs a 2D grid");
}

}  // namespace

PerturbationData perturbation_data(const PowerDensities2D& m, const PowerDensities2D& m0) {
  for (int k = 0; k < 3; ++k) {
    require_same_grid(m[k].grid(), m[0].grid(), "perturbation_data");
    require_same_grid(m0[k].grid(), m[0].grid(), "perturbation_data");
  }
  return {m[0] - m0[0], m[1] - m0[1], m[2] - m0[2]};
}

PowerDensities2D power_densities(const ScalarField& sigma, const PotentialSolution& u1, const PotentialSolution& u2) {
  const auto g1 = potential_gradient(u1);
  const auto g2 = potential_gradient(u2);
  return {power_density(sigma, g1, g1), power_density(sigma, g1, g2), power_density(sigma, g2, g2)};
}

ScalarField pair_rhs(const ScalarField& gaa, const ScalarField& gbb, const ScalarField& gab, int a, int b) {
  const ScalarField d = gbb - gaa;
  ScalarField rhs = fd_derivative(d, a, 2) - fd_derivative(d, b, 2);
  rhs *= 0.5;
  rhs -= 2.0 * fd_mixed(gab, a, b);
  return rhs;
}

ScalarField iteration0(const PerturbationData& g) {
  require_2d(g.g11.grid(), "iteration0");
  require_same_grid(g.g12.grid(), g.g11.grid(), "iteration0");
  require_same_grid(g.g22.grid(), g.g11.grid(), "iteration0");
  return poisson_dirichlet(pair_rhs(g.g11, g.g22, g.g12, 0, 1));
}

VectorField gradient_formulas(const PerturbationData& g) {
  require_2d(g.g11.grid(), "gradient_formulas");
  const ScalarField d = g.g22 - g.g11;
  VectorField out(g.g11.grid());
  out[0] = 0.5 * fd_derivative(d, 0, 1) - fd_derivative(g.g12, 1, 1);
  out[1] = -0.5 * fd_derivative(d, 1, 1) - fd_derivative(g.g12, 0, 1);
  return out;
}

ScalarField parametrix_update(const ScalarField& sigma_bench, const PotentialSolution& u1, const PotentialSolution& u2,
                              const PowerDensities2D& measured, const ReconOptions& options,
                              ParametrixReport* report) {
  const Grid& grid = sigma_bench.grid();
  require_2d(grid, "parametrix_update");
  for (const auto& m : measured) require_same_grid(m.grid(), grid, "parametrix_update");

  const auto grad1 = potential_gradient(u1);
  const auto grad2 = potential_gradient(u2);
  const std::size_t size = grid.size();

  // W_j = U_j + V_j, stored as W[j][axis].
  std::array<VectorField, 2> w{VectorField(grid), VectorField(grid)};
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double s = std::sqrt(sigma_bench[i]);
    const double a11 = s * grad1[0][i], a12 = s * grad1[1][i];
    const double a21 = s * grad2[0][i], a22 = s * grad2[1][i];
    const double sb = sigma_bench[i];
    const double g11 = measured[0][i] - sb * (grad1[0][i] * grad1[0][i] + grad1[1][i] * grad1[1][i]);
    const double g12 = measured[1][i] - sb * (grad1[0][i] * grad2[0][i] + grad1[1][i] * grad2[1][i]);
    const double g22 = measured[2][i] - sb * (grad2[0][i] * grad2[0][i] + grad2[1][i] * grad2[1][i]);
    const double det = a11 * a22 - a12 * a21;
    double v1x = 0.0, v1y = 0.0, v2x = 0.0, v2y = 0.0;
    if (std::abs(det) >= options.det_threshold * std::hypot(a11, a12) * std::hypot(a21, a22)) {
      // [U1; U2] V1 = (g11, g12)/2 and [U1; U2] V2 = (g12, g22)/2.
      auto solve = [&](double r1, double r2, double& x, double& y) {
        x = (r1 * a22 - a12 * r2) / det;
        y = (a11 * r2 - a21 * r1) / det;
        const double e1 = std::abs(a11 * x + a12 * y - r1);
        const double e2 = std::abs(a21 * x + a22 * y - r2);
        worst = std::max(worst, std::max(e1, e2) / (1.0 + std::max(std::abs(r1), std::abs(r2))));
      };
      solve(0.5 * g11, 0.5 * g12, v1x, v1y);
      solve(0.5 * g12, 0.5 * g22, v2x, v2y);
    } else {
      ++violations;
    }
    w[0][0][i] = a11 + v1x;
    w[0][1][i] = a12 + v1y;
    w[1][0][i] = a21 + v2x;
    w[1][1][i] = a22 + v2y;
  }

  // S = 1/2 sum_j (2/|W_j|^2) (W_j^perp curl W_j + W_j div W_j).
  VectorField flux(grid);
  std::size_t floored = 0;
  for (int j = 0; j < 2; ++j) {
    const auto& wj = w[j];
    const ScalarField dxx = spectral_derivative(wj[0], 0);
    const ScalarField dyy = spectral_derivative(wj[1], 1);
    const ScalarField dxy = spectral_derivative(wj[1], 0);
    const ScalarField dyx = spectral_derivative(wj[0], 1);
    double peak = 0.0;
    for (std::size_t i = 0; i < size; ++i) peak = std::max(peak, wj[0][i] * wj[0][i] + wj[1][i] * wj[1][i]);
    const double floor = options.w_floor * peak;
    for (std::size_t i = 0; i < size; ++i) {
      double norm2 = wj[0][i] * wj[0][i] + wj[1][i] * wj[1][i];
      if (norm2 < floor) {
        norm2 = floor;
        ++floored;
      }
      if (!(norm2 > 0.0)) continue;
      const double div = dxx[i] + dyy[i];
      const double curl = dxy[i] - dyx[i];
      flux[0][i] += (-wj[1][i] * curl + wj[0][i] * div) / norm2;
      flux[1][i] += (wj[0][i] * curl + wj[1][i] * div) / norm2;
    }
  }
  ScalarField rhs = spectral_derivative(flux[0], 0) + spectral_derivative(flux[1], 1);
  rhs *= -1.0;
  // Solve for ln sigma, then exponentiate in place.
  ScalarField sigma = poisson_dirichlet(rhs);
  for (std::size_t i = 0; i < size; ++i) sigma[i] = std::exp(sigma[i]);

  if (report) {
    report->mask_violation = static_cast<double>(violations) / static_cast<double>(size);
    report->floored = floored;
    report->max_node_residual = worst;
  }
  return sigma;
}

void apply_update(ScalarField& sigma, const ScalarField& rho, UpdateRule rule) {
  require_same_grid(sigma.grid(), rho.grid(), "apply_update");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    sigma[i] *= rule == UpdateRule::Exponential ? std::exp(rho[i]) : 1.0 + rho[i];
  }
}

void sanitize_conductivity(ScalarField& sigma, double lo, double hi, int layers) {
  const Grid& g = sigma.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(sigma[i])) throw NumericError("conductivity update produced a non-finite value");
    sigma[i] = g.layer(i) < layers ? 1.0 : std::clamp(sigma[i], lo, hi);
  }
}

double combined_rel_l2(const std::vector<const ScalarField*>& a, const std::vector<const ScalarField*>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("combined_rel_l2 needs matching lists");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    require_same_grid(a[k]->grid(), b[k]->grid(), "combined_rel_l2");
    for (std::size_t i = 0; i < a[k]->size(); ++i) {
      const double d = (*a[k])[i] - (*b[k])[i];
      num += d * d;
      den += (*b[k])[i] * (*b[k])[i];
    }
  }
  if (!(den > 0.0)) throw NumericError("combined_rel_l2: reference is zero");
  return std::sqrt(num / den);
}

ReconResult reconstruct2d(const PowerDensities2D& measured, const ScalarField& sigma0, int n_iters,
                          const ReconOptions& options) {
  if (n_iters < 0) throw std::invalid_argument("n_iters must be non-negative");
  const Grid& grid = sigma0.grid();
  require_2d(grid, "reconstruct2d");
  for (const auto& m : measured) require_same_grid(m.grid(), grid, "reconstruct2d");
  check_conductivity(sigma0);

  ReconResult r;
  const std::vector<const ScalarField*> data{&measured[0], &measured[1], &measured[2]};
  try {
    PotentialSolution u1 = solve_potential(sigma0, {1}, options.forward);
    PotentialSolution u2 = solve_potential(sigma0, {2}, options.forward);
    {
      const auto m0 = power_densities(sigma0, u1, u2);
      const ScalarField rho = iteration0(perturbation_data(measured, m0));
      ScalarField sigma = sigma0;
      apply_update(sigma, rho, options.update);
      sanitize_conductivity(sigma, options.sigma_min, options.sigma_max, options.pinned_layers);
      r.iterates.push_back(std::move(sigma));
    }
    for (int k = 0;; ++k) {
      const ScalarField& current = r.iterates.back();
      u1 = solve_potential(current, {1}, options.forward);
      u2 = solve_potential(current, {2}, options.forward);
      const auto m = power_densities(current, u1, u2);
      r.residual_history.push_back(combined_rel_l2({&m[0], &m[1], &m[2]}, data));
      if (k == n_iters) break;
      ParametrixReport rep;
      ScalarField next = parametrix_update(current, u1, u2, measured, options, &rep);
      sanitize_conductivity(next, options.sigma_min, options.sigma_max, options.pinned_layers);
      r.mask_violation.push_back(rep.mask_violation);
      r.floored.push_back(rep.floored);
      r.iterates.push_back(std::move(next));
    }
  } catch (const NumericError& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.sigma = r.iterates.empty() ? sigma0 : r.iterates.back();
  return r;
}

}  // namespace aet
