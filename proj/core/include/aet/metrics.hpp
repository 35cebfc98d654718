#pragma once

#include "aet/grid.hpp"

#include <span>

namespace aet {

/// Discrete L2 norm with the sqrt(h^dim) quadrature weight.
double l2_norm(const ScalarField& f);

/// ||a - b|| / ||b||. Throws NumericError when ||b|| == 0.
double rel_l2(const ScalarField& a, const ScalarField& b);

/// Same for flat arrays (uniform weights cancel in the ratio).
double rel_l2(std::span<const double> a, std::span<const double> b);

double max_abs_diff(const ScalarField& a, const ScalarField& b);

}  // namespace aet
