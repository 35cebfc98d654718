#pragma once

#include "aet/grid.hpp"

#include <string>
#include <vector>

namespace aet {

/// Boundary current n(x)·e_j: +1 on the face x_j = 1, -1 on x_j = -1.
struct CurrentPattern {
  int index = 1;  // j in 1..dim
};

struct ForwardOptions {
  double tol = 1e-10;
  int max_iter = 500;
};

/// Outcome of one preconditioned conjugate residual run.
struct SolveReport {
  double residual = 0.0;  // relative, in the preconditioner norm
  int iterations = 0;
  bool converged = false;
  bool monotone = true;   // residual never increased
};

/// The discrete operator v -> -sum_a Ds_a[sigma Dc_a v] for one conductivity.
///
/// Dc is the cosine-extension derivative and Ds its negative adjoint in the
/// trapezoid inner product, so the operator is symmetric positive
/// semi-definite there. Its null space is spanned by the cosine modes with
/// every index equal to 0 or n-1; those are filtered by the preconditioner.
class ConductivityOperator {
public:
  explicit ConductivityOperator(ScalarField sigma);

  const Grid& grid() const { return sigma_.grid(); }
  const ScalarField& sigma() const { return sigma_; }

  void apply(const ScalarField& v, ScalarField& out) const;

  /// Solves apply(x) = rhs, starting from the incoming x.
  SolveReport solve(const ScalarField& rhs, ScalarField& x, double tol, int max_iter) const;

private:
  ScalarField sigma_;
  std::vector<double> weights_;
};

struct PotentialSolution {
  ScalarField u;  // x_j + v, zero trapezoid mean
  ScalarField v;
  CurrentPattern current;
  std::string sigma_id;
  SolveReport report;
};

/// Throws std::invalid_argument unless sigma > 0 everywhere and
/// |sigma - 1| < 1e-12 on the two outermost node layers.
void check_conductivity(const ScalarField& sigma);

/// Potential for the face current `current`; throws NumericError if the
/// iteration cap is hit before `tol`.
PotentialSolution solve_potential(const ScalarField& sigma, CurrentPattern current,
                                  const ForwardOptions& options = {});

/// e_j + grad v with spectral derivatives.
VectorField potential_gradient(const PotentialSolution& s);

ScalarField power_density(const ScalarField& sigma, const PotentialSolution& ui, const PotentialSolution& uj);
ScalarField power_density(const ScalarField& sigma, const VectorField& grad_i, const VectorField& grad_j);

/// Trapezoid quadrature of u·I over the cube faces with I = n·e_j.
double boundary_functional(const ScalarField& u, CurrentPattern weight);

}  // namespace aet
