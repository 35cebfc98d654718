#include "aet/forward.hpp"

#include "aet/field_io.hpp"
#include "aet/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace aet {
namespace {

double dot(const std::vector<double>& w, const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * pa[i] * pb[i];
  return s;
}

void axpy(double a, const ScalarField& x, ScalarField& y) {
  const double* px = x.data();
  double* py = y.data();
  for (std::size_t i = 0; i < y.size(); ++i) py[i] += a * px[i];
}

void precondition(const ScalarField& r, ScalarField& z) {
  detail::apply_matched_neumann_inverse(r.data(), z.data(), r.grid());
}

}  // namespace

ConductivityOperator::ConductivityOperator(ScalarField sigma)
    : sigma_(std::move(sigma)), weights_(sigma_.grid().trapezoid_weights()) {}

void ConductivityOperator::apply(const ScalarField& v, ScalarField& out) const {
  const Grid& g = grid();
  require_same_grid(g, v.grid(), "conductivity operator");
  if (!(out.grid() == g)) out = ScalarField(g);
  std::fill(out.values().begin(), out.values().end(), 0.0);
  ScalarField flux(g);
  const double* s = sigma_.data();
  for (int a = 0; a < g.dim(); ++a) {
    std::copy(v.values().begin(), v.values().end(), flux.values().begin());
    detail::cosine_derivative_inplace(flux.data(), g, a);
    double* f = flux.data();
    for (std::size_t i = 0; i < flux.size(); ++i) f[i] *= s[i];
    detail::sine_derivative_inplace(flux.data(), g, a);
    out -= flux;
  }
}

// Preconditioned conjugate residual: minimizes the preconditioner norm of the
// residual over the Krylov space, so that norm decreases monotonically.
SolveReport ConductivityOperator::solve(const ScalarField& rhs, ScalarField& x, double tol, int max_iter) const {
  const Grid& g = grid();
  require_same_grid(g, rhs.grid(), "conductivity solve");
  if (!(x.grid() == g)) x = ScalarField(g);
  SolveReport rep;

  ScalarField z(g);
  precondition(rhs, z);
  const double bnorm2 = dot(weights_, rhs, z);
  if (!(bnorm2 > 0.0)) {
    std::fill(x.values().begin(), x.values().end(), 0.0);
    rep.converged = true;
    return rep;
  }

  ScalarField r(g);
  apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
  precondition(r, z);
  ScalarField az(g);
  apply(z, az);
  ScalarField p = z;
  ScalarField ap = az;
  ScalarField q(g);
  double rz = dot(weights_, r, z);
  double zaz = dot(weights_, z, az);
  double res = std::sqrt(std::max(rz, 0.0) / bnorm2);
  rep.residual = res;

  while (res > tol && rep.iterations < max_iter) {
    precondition(ap, q);
    const double denom = dot(weights_, ap, q);
    if (!(denom > 0.0)) break;
    const double alpha = zaz / denom;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    axpy(-alpha, q, z);
    apply(z, az);
    const double zaz_new = dot(weights_, z, az);
    const double beta = zaz_new / zaz;
    zaz = zaz_new;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = z[i] + beta * p[i];
      ap[i] = az[i] + beta * ap[i];
    }
    rz = dot(weights_, r, z);
    const double next = std::sqrt(std::max(rz, 0.0) / bnorm2);
    if (next > res * (1.0 + 1e-12)) rep.monotone = false;
    res = next;
    ++rep.iterations;
    if (!std::isfinite(res)) break;
  }
  rep.residual = res;
  rep.converged = res <= tol;
  return rep;
}

void check_conductivity(const ScalarField& sigma) {
  const Grid& g = sigma.grid();
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i])) {
      throw std::invalid_argument("conductivity must be positive and finite (node " + std::to_string(i) + ")");
    }
    if (g.layer(i) < 2 && std::abs(sigma[i] - 1.0) >= 1e-12) {
      throw std::invalid_argument("conductivity must equal 1 on the two outermost node layers (node " +
                                  std::to_string(i) + ")");
    }
  }
}

PotentialSolution solve_potential(const ScalarField& sigma, CurrentPattern current, const ForwardOptions& options) {
  const Grid& g = sigma.grid();
  if (current.index < 1 || current.index > g.dim()) throw std::out_of_range("current index out of range");
  check_conductivity(sigma);
  const int axis = current.index - 1;

  ScalarField excess = sigma;
  for (auto& v : excess.values()) v -= 1.0;
  ScalarField rhs = sine_derivative(excess, axis);

  ConductivityOperator op(sigma);
  PotentialSolution sol;
  sol.current = current;
  sol.sigma_id = content_hash(sigma.values());
  sol.v = ScalarField(g);
  sol.report = op.solve(rhs, sol.v, options.tol, options.max_iter);
  if (!sol.report.converged) {
    throw NumericError("potential solve for current " + std::to_string(current.index) + " stopped at residual " +
                       std::to_string(sol.report.residual) + " after " + std::to_string(sol.report.iterations) +
                       " iterations");
  }
  const double vm = mean(sol.v);
  for (auto& v : sol.v.values()) v -= vm;
  sol.u = sol.v;
  for (std::size_t i = 0; i < g.size(); ++i) sol.u[i] += g.coord(g.unravel(i)[axis]);
  return sol;
}

VectorField potential_gradient(const PotentialSolution& s) {
  const Grid& g = s.v.grid();
  VectorField grad(g);
  for (int a = 0; a < g.dim(); ++a) {
    grad[a] = spectral_derivative(s.v, a);
    if (a == s.current.index - 1) {
      for (auto& v : grad[a].values()) v += 1.0;
    }
  }
  return grad;
}

ScalarField power_density(const ScalarField& sigma, const VectorField& gi, const VectorField& gj) {
  require_same_grid(sigma.grid(), gi.grid(), "power density");
  require_same_grid(sigma.grid(), gj.grid(), "power density");
  const Grid& g = sigma.grid();
  ScalarField m(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) s += gi[a][k] * gj[a][k];
    m[k] = sigma[k] * s;
  }
  return m;
}

ScalarField power_density(const ScalarField& sigma, const PotentialSolution& ui, const PotentialSolution& uj) {
  return power_density(sigma, potential_gradient(ui), potential_gradient(uj));
}

double boundary_functional(const ScalarField& u, CurrentPattern weight) {
  const Grid& g = u.grid();
  if (weight.index < 1 || weight.index > g.dim()) throw std::out_of_range("weight index out of range");
  const int axis = weight.index - 1;
  const int n = g.n();
  const double h = g.spacing();
  double total = 0.0;
  // Face integral of u(x_j = +1) - u(x_j = -1) with trapezoid weights on the face.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unravel(i);
    if (idx[axis] != n - 1) continue;
    double w = 1.0;
    for (int a = 0; a < g.dim(); ++a) {
      if (a == axis) continue;
      w *= (idx[a] == 0 || idx[a] == n - 1) ? 0.5 * h : h;
    }
    const std::size_t opposite = i - static_cast<std::size_t>(n - 1) * g.stride(axis);
    total += w * (u[i] - u[opposite]);
  }
  return total;
}

}  // namespace aet
