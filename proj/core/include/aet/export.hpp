#pragma once

#include "aet/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aet {

struct PgmOptions {
  std::optional<double> lo, hi;  // window; field min/max when absent
  int plane = 0;                 // 3D fields: cross_section plane
};

/// 8-bit gray levels of a 2D field (3D: the selected plane through the
/// origin), row 0 = top (largest second coordinate), column 0 = left.
/// Values are clamped to the window. Throws std::invalid_argument on a
/// degenerate window (lo >= hi).
std::vector<std::uint8_t> gray_levels(const ScalarField& f, const PgmOptions& options = {});

/// Binary (P5) PGM.
void write_pgm(const std::filesystem::path& path, const ScalarField& f, const PgmOptions& options = {});

enum class ProfileKind { Axis, Diagonal };

struct ProfileOptions {
  ProfileKind kind = ProfileKind::Axis;
  int axis = 0;         // direction of an axis profile
  double offset = 0.0;  // other coordinate(s), snapped to the nearest node
  int plane = 0;        // 3D fields: cross_section plane
};

/// (coordinate, value) along a line of nodes. Axis profiles run along
/// `axis` at the given offset; diagonal profiles run from (-1,-1) to (1,1)
/// and report x1 as the coordinate.
std::vector<std::pair<double, double>> profile(const ScalarField& f, const ProfileOptions& options = {});

/// `coordinate,value` lines with a header.
std::string format_profile_csv(const std::vector<std::pair<double, double>>& p);
void write_profile_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& p);

}  // namespace aet
