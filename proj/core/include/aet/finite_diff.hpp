#pragma once

#include "aet/grid.hpp"

namespace aet {

/// Second-order finite difference of order 1 or 2 along `axis`.
///
/// Centered stencils in the interior, one-sided second-order stencils on
/// the two boundary nodes of each line.
ScalarField fd_derivative(const ScalarField& f, int axis, int order);

/// d^2 f / dx_a dx_b. For a == b this is fd_derivative(f, a, 2); otherwise it
/// is the composition of two first-order differences.
ScalarField fd_mixed(const ScalarField& f, int a, int b);

}  // namespace aet
