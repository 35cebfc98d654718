#pragma once

#include "aet/grid.hpp"

namespace aet {

/// d/dx_axis through the cosine (even) extension of f on each line.
///
/// The result is a sine series along `axis`, so its values on the two faces
/// normal to `axis` are exactly zero. Cosine modes cos(k*pi*(x+1)/2) with
/// k < n-1 are differentiated exactly.
ScalarField spectral_derivative(const ScalarField& f, int axis);

/// d/dx_axis of a sine series along `axis` (face values of f are ignored).
/// Adjoint, up to sign, of spectral_derivative under the trapezoid inner
/// product.
ScalarField sine_derivative(const ScalarField& f, int axis);

/// Solves Lap(u) = rhs on the cube with u = 0 on the boundary by sine-series
/// diagonalization. Boundary values of rhs are ignored; those of u are 0.
ScalarField poisson_dirichlet(const ScalarField& rhs);

/// Solves Lap(u) = rhs - mean(rhs) with zero Neumann data by cosine-series
/// diagonalization; u has zero trapezoid mean.
ScalarField poisson_neumann(const ScalarField& rhs);

/// Laplacian of a field through its sine series (inverse of poisson_dirichlet).
ScalarField sine_laplacian(const ScalarField& f);

namespace detail {

enum class Extension { Even, Odd };

/// In-place unnormalized DCT-I (Even, all n nodes) or DST-I (Odd, the n-2
/// interior nodes) along one axis of a field laid out on `grid`.
void transform_axis(double* data, const Grid& grid, int axis, Extension ext);

/// In-place versions of spectral_derivative / sine_derivative on raw
/// buffers laid out on `grid`.
void cosine_derivative_inplace(double* data, const Grid& grid, int axis);
void sine_derivative_inplace(double* data, const Grid& grid, int axis);

/// Same transform applied along every axis.
void transform_all(double* data, const Grid& grid, Extension ext);

/// Inverse of the cosine-space operator -sum_a D_s^a D_c^a, i.e. the
/// pseudo-spectral Neumann Laplacian whose highest cosine mode per axis is
/// annihilated by the derivative. Null modes map to zero.
void apply_matched_neumann_inverse(const double* in, double* out, const Grid& grid);

}  // namespace detail

}  // namespace aet
