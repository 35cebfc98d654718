#pragma once

#include "aet/recon2d.hpp"

#include <array>
#include <string>

namespace aet {

/// Power densities of the three face currents, ordered
/// (1,1), (2,2), (3,3), (1,2), (1,3), (2,3).
using PowerDensities3D = std::array<ScalarField, 6>;

struct PerturbationData3D {
  ScalarField g11, g22, g33, g12, g13, g23;
};

enum class Mode3D { Full, Slice };

Mode3D parse_mode3d(const std::string& name);
std::string to_string(Mode3D mode);

PerturbationData3D perturbation_data(const PowerDensities3D& m, const PowerDensities3D& m0);

PowerDensities3D power_densities(const ScalarField& sigma, const PotentialSolution& u1, const PotentialSolution& u2,
                                 const PotentialSolution& u3);

/// Sum of the three pair right-hand sides; equals 2 Lap(rho) only up to the
/// symbol (|k|^4 + sum k_a^4) / (2 |k|^4), which lies in [2/3, 1].
ScalarField full_rhs(const PerturbationData3D& g);

/// Slice mode uses g11, g22, g12 only and solves one 2D Dirichlet problem
/// per x3 plane. Full mode solves Lap(rho) = full_rhs / 2 on the cube.
ScalarField iteration0_3d(const PerturbationData3D& g, Mode3D mode);

/// Fixed-point iteration sigma_{k+1} = sigma_k exp(rho_k) with rho_k from
/// iteration0_3d of the current misfit. Produces n_iters iterates (#0 to
/// #n_iters-1) and stops early when the residual grows twice in a row.
ReconResult reconstruct3d(const PowerDensities3D& measured, const ScalarField& sigma0, int n_iters, Mode3D mode,
                          const ReconOptions& options = {});

/// Planes through the origin: 0 = Ox1x2 (x3 = 0), 1 = Ox1x3, 2 = Ox2x3.
ScalarField cross_section(const ScalarField& f, int plane);

}  // namespace aet
