#include "aet/recon3d.hpp"

#include "aet/parallel.hpp"
#include "aet/spectral.hpp"

#include <cmath>

namespace aet {
namespace {

void require_3d(const Grid& g, const char* what) {
  if (g.dim() != 3) throw std::invalid_argument(std::string(what) + " needs a 3D grid");
}

const ScalarField& checked(const ScalarField& f, const Grid& g, const char* name) {
  if (f.size() == 0) throw std::invalid_argument(std::string("iteration0_3d: missing ") + name);
  require_same_grid(f.grid(), g, "iteration0_3d");
  return f;
}

}  // namespace

Mode3D parse_mode3d(const std::string& name) {
  if (name == "full") return Mode3D::Full;
  if (name == "slice") return Mode3D::Slice;
  throw std::invalid_argument("unknown 3D mode '" + name + "' (expected full or slice)");
}

std::string to_string(Mode3D mode) { return mode == Mode3D::Full ? "full" : "slice"; }

PerturbationData3D perturbation_data(const PowerDensities3D& m, const PowerDensities3D& m0) {
  for (int k = 0; k < 6; ++k) {
    require_same_grid(m[k].grid(), m[0].grid(), "perturbation_data");
    require_same_grid(m0[k].grid(), m[0].grid(), "perturbation_data");
  }
  return {m[0] - m0[0], m[1] - m0[1], m[2] - m0[2], m[3] - m0[3], m[4] - m0[4], m[5] - m0[5]};
}

PowerDensities3D power_densities(const ScalarField& sigma, const PotentialSolution& u1, const PotentialSolution& u2,
                                 const PotentialSolution& u3) {
  const auto g1 = potential_gradient(u1);
  const auto g2 = potential_gradient(u2);
  const auto g3 = potential_gradient(u3);
  return {power_density(sigma, g1, g1), power_density(sigma, g2, g2), power_density(sigma, g3, g3),
          power_density(sigma, g1, g2), power_density(sigma, g1, g3), power_density(sigma, g2, g3)};
}

ScalarField full_rhs(const PerturbationData3D& g) {
  ScalarField rhs = pair_rhs(g.g11, g.g22, g.g12, 0, 1);
  rhs += pair_rhs(g.g11, g.g33, g.g13, 0, 2);
  rhs += pair_rhs(g.g22, g.g33, g.g23, 1, 2);
  return rhs;
}

ScalarField iteration0_3d(const PerturbationData3D& g, Mode3D mode) {
  const Grid& grid = g.g11.grid();
  require_3d(grid, "iteration0_3d");
  checked(g.g22, grid, "g22");
  checked(g.g12, grid, "g12");
  if (mode == Mode3D::Full) {
    checked(g.g33, grid, "g33");
    checked(g.g13, grid, "g13");
    checked(g.g23, grid, "g23");
    ScalarField rhs = full_rhs(g);
    rhs *= 0.5;
    return poisson_dirichlet(rhs);
  }

  // Finite differences along x1, x2 act plane by plane, so the 3D stencil
  // result restricted to a plane equals the 2D one.
  const ScalarField rhs = pair_rhs(g.g11, g.g22, g.g12, 0, 1);
  const int n = grid.n();
  const Grid plane(2, n);
  ScalarField rho(grid);
  parallel_for(static_cast<std::size_t>(n - 2), [&](std::size_t s) {
    const int k = static_cast<int>(s) + 1;
    ScalarField slice(plane);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) slice[plane.index(i, j)] = rhs[grid.index(i, j, k)];
    const ScalarField sol = poisson_dirichlet(slice);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rho[grid.index(i, j, k)] = sol[plane.index(i, j)];
  });
  return rho;
}

ReconResult reconstruct3d(const PowerDensities3D& measured, const ScalarField& sigma0, int n_iters, Mode3D mode,
                          const ReconOptions& options) {
  if (n_iters < 0) throw std::invalid_argument("n_iters must be non-negative");
  const Grid& grid = sigma0.grid();
  require_3d(grid, "reconstruct3d");
  for (const auto& m : measured) require_same_grid(m.grid(), grid, "reconstruct3d");
  check_conductivity(sigma0);

  ReconResult r;
  std::vector<const ScalarField*> data;
  for (const auto& m : measured) data.push_back(&m);
  ScalarField sigma = sigma0;
  try {
    for (int k = 0;; ++k) {
      std::array<PotentialSolution, 3> u;
      parallel_for(3, [&](std::size_t j) {
        u[j] = solve_potential(sigma, {static_cast<int>(j) + 1}, options.forward);
      });
      const auto m0 = power_densities(sigma, u[0], u[1], u[2]);
      if (k > 0) {
        std::vector<const ScalarField*> model;
        for (const auto& m : m0) model.push_back(&m);
        r.residual_history.push_back(combined_rel_l2(model, data));
        const auto& h = r.residual_history;
        if (h.size() >= 3 && h[h.size() - 1] > h[h.size() - 2] && h[h.size() - 2] > h[h.size() - 3]) {
          r.ok = false;
          r.error = "residual increased on two consecutive iterations; stopped at iteration " +
                    std::to_string(k - 1);
          break;
        }
      }
      if (k == n_iters) break;
      const ScalarField rho = iteration0_3d(perturbation_data(measured, m0), mode);
      apply_update(sigma, rho, options.update);
      sanitize_conductivity(sigma, options.sigma_min, options.sigma_max, options.pinned_layers);
      r.iterates.push_back(sigma);
    }
  } catch (const NumericError& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.sigma = r.iterates.empty() ? sigma0 : r.iterates.back();
  return r;
}

ScalarField cross_section(const ScalarField& f, int plane) {
  const Grid& g = f.grid();
  require_3d(g, "cross_section");
  if (plane < 0 || plane > 2) throw std::out_of_range("cross_section plane must be 0, 1 or 2");
  const int n = g.n();
  if (n % 2 == 0) throw std::invalid_argument("cross_section needs an odd node count");
  const int c = (n - 1) / 2;
  const Grid out_grid(2, n);
  ScalarField out(out_grid);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t src = plane == 0 ? g.index(i, j, c) : plane == 1 ? g.index(i, c, j) : g.index(c, i, j);
      out[out_grid.index(i, j)] = f[src];
    }
  }
  return out;
}

}  // namespace aet
