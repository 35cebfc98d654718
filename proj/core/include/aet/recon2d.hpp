#pragma once

#include "aet/forward.hpp"
#include "aet/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace aet {

/// Power densities of the two face currents, ordered (1,1), (1,2), (2,2).
using PowerDensities2D = std::array<ScalarField, 3>;

/// g_jk = M_jk - M0_jk; g12 stored once.
struct PerturbationData {
  ScalarField g11, g12, g22;
};

/// Conductivity estimate plus per-iteration history (index 0 = iteration #0).
struct ReconResult {
  ScalarField sigma;
  std::vector<ScalarField> iterates;
  std::vector<double> residual_history;  // rel L2 of M(sigma_k) against the data
  std::vector<double> mask_violation;    // parametrix: fraction of nodes failing the det test
  std::vector<std::size_t> floored;      // parametrix: nodes where |W_j|^2 hit the floor
  bool ok = true;
  std::string error;
};

/// How a linearized correction rho updates sigma: sigma * exp(rho) (default,
/// matches ln sigma = ln sigma0 + rho to first order) or sigma * (1 + rho).
enum class UpdateRule { Exponential, Linear };

struct ReconOptions {
  ForwardOptions forward;
  UpdateRule update = UpdateRule::Exponential;
  double sigma_min = 0.1353352832366127;  // e^-2
  double sigma_max = 7.38905609893065;    // e^2
  int pinned_layers = 2;
  double det_threshold = 1e-3;
  double w_floor = 1e-8;  // relative to max |W_j|^2
};

PerturbationData perturbation_data(const PowerDensities2D& m, const PowerDensities2D& m0);

/// Power densities sigma grad u_i . grad u_j for the canonical currents.
PowerDensities2D power_densities(const ScalarField& sigma, const PotentialSolution& u1, const PotentialSolution& u2);

/// 1/2 (d_a^2 - d_b^2)(g_bb - g_aa) - 2 d_a d_b g_ab with finite differences.
/// With unit background this equals (d_a^2 + d_b^2) rho exactly in 2D.
ScalarField pair_rhs(const ScalarField& gaa, const ScalarField& gbb, const ScalarField& gab, int a, int b);

/// Linearized inversion about sigma = 1: Dirichlet Poisson solve of pair_rhs.
ScalarField iteration0(const PerturbationData& g);

/// (d1 rho, d2 rho) from first derivatives of g; a consistency check.
VectorField gradient_formulas(const PerturbationData& g);

struct ParametrixReport {
  double mask_violation = 0.0;
  std::size_t floored = 0;
  double max_node_residual = 0.0;  // of the 2x2 solves where the det test holds
};

/// One parametrix step about sigma_bench; returns the updated sigma.
ScalarField parametrix_update(const ScalarField& sigma_bench, const PotentialSolution& u1, const PotentialSolution& u2,
                              const PowerDensities2D& measured, const ReconOptions& options = {},
                              ParametrixReport* report = nullptr);

/// Iteration #0 from sigma0 followed by `n_iters` parametrix steps.
/// Forward failures stop the loop; the partial result carries the message.
ReconResult reconstruct2d(const PowerDensities2D& measured, const ScalarField& sigma0, int n_iters,
                          const ReconOptions& options = {});

/// sigma *= exp(rho) or (1 + rho) per the rule.
void apply_update(ScalarField& sigma, const ScalarField& rho, UpdateRule rule);

/// Clamps to [lo, hi] and resets the outer `layers` node layers to 1.
void sanitize_conductivity(ScalarField& sigma, double lo, double hi, int layers);

/// sqrt(sum ||a_k - b_k||^2 / sum ||b_k||^2).
double combined_rel_l2(const std::vector<const ScalarField*>& a, const std::vector<const ScalarField*>& b);

}  // namespace aet
