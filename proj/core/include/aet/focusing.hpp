#pragma once

#include "aet/grid.hpp"
#include "aet/probe.hpp"

#include <array>
#include <string>

namespace aet {

struct FocusedField {
  ScalarField field;
  std::array<int, 2> pair{1, 1};
  std::string source;
};

/// Synthetic focusing: recovers the field whose front pairings produced `s`.
///
/// Per transducer the sinogram is multiplied by max(t, w) and
/// anti-differentiated in t, passed through the exact circular-mean
/// inversion filter for centres on a circle (product-integrated
/// logarithmic kernel), and backprojected onto the grid with linear
/// interpolation in t. Nodes outside |x| < R_s - w get the baseline
/// delta_ij when `restore_baseline` is set, 0 otherwise.
FocusedField focus(const Sinogram& s, const Grid& grid, bool restore_baseline = true);

/// Point-spread function of the focusing pipeline at y (ideal point source).
ScalarField synthesize_delta(const std::array<double, 3>& y, const TransducerArray& array, const Grid& grid);

}  // namespace aet
