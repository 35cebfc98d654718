#pragma once

// Dense second-order finite-volume reference solvers used only by tests.

#include "aet/grid.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <vector>

namespace aet::oracle {

/// Node-centred finite-volume solve of div(sigma grad u) = 0 on the square
/// with Neumann current n·e_j (j = 1 or 2); zero trapezoid mean.
inline ScalarField fd_neumann_potential(const ScalarField& sigma, int j) {
  const Grid& g = sigma.grid();
  const int n = g.n();
  const double h = g.spacing();
  const int N = n * n;
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
  auto id = [n](int i, int k) { return i * n + k; };
  auto face_len = [n, h](int along) { return (along == 0 || along == n - 1) ? 0.5 * h : h; };
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const int p = id(i, k);
      if (p == 0) continue;
      auto couple = [&](int i2, int k2, double len) {
        const int q = id(i2, k2);
        const double s = 0.5 * (sigma[static_cast<std::size_t>(p)] + sigma[static_cast<std::size_t>(q)]);
        const double c = s * len / h;
        trips.emplace_back(p, p, -c);
        trips.emplace_back(p, q, c);
      };
      if (i > 0) couple(i - 1, k, face_len(k));
      if (i < n - 1) couple(i + 1, k, face_len(k));
      if (k > 0) couple(i, k - 1, face_len(i));
      if (k < n - 1) couple(i, k + 1, face_len(i));
      // Current entering through the cube faces bounding this control volume.
      if (j == 1) {
        if (i == n - 1) b[p] -= face_len(k);
        if (i == 0) b[p] += face_len(k);
      } else {
        if (k == n - 1) b[p] -= face_len(i);
        if (k == 0) b[p] += face_len(i);
      }
    }
  }
  trips.emplace_back(0, 0, 1.0);
  Eigen::SparseMatrix<double> a(N, N);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  Eigen::VectorXd x = lu.solve(b);
  ScalarField u(g);
  for (int p = 0; p < N; ++p) u[static_cast<std::size_t>(p)] = x[p];
  const double m = mean(u);
  for (auto& v : u.values()) v -= m;
  return u;
}

}  // namespace aet::oracle
