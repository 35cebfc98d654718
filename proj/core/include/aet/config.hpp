#pragma once

#include "aet/grid.hpp"
#include "aet/probe.hpp"
#include "aet/recon3d.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace aet {

/// Invalid or inconsistent run configuration. `field()` names the key
/// (`section.key`) that caused it, empty for syntax errors.
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

struct RunConfig {
  // [experiment]
  std::string name = "custom";
  int dim = 2;
  // [grid]
  int forward_n = 257;
  int recon_n = 65;
  // [phantom] builtin name or path to a phantom text file
  std::string phantom = "table1-2d";
  // [probe] (2D only)
  SinogramKind measurement = SinogramKind::Linearized;
  int transducers = 256;
  int radii = 257;
  double circle_radius = 1.6;
  double t_max = 0.0;  // 0: 2 R_s
  double width = 0.0;  // 0: 3 h of the forward grid
  double amplitude = 1e-5;
  // [noise]
  double noise_level = 0.0;
  std::uint64_t seed = 1;
  // [reconstruction]
  std::vector<int> currents{1, 2};
  int iterations = 1;
  Mode3D mode = Mode3D::Full;
  // [output]
  std::string out_dir = "out";

  /// Geometry with the defaults resolved against the forward grid.
  TransducerArray array() const;
  /// Current pairs (i <= j) in storage order: (1,1), (1,2), (2,2) in 2D and
  /// (1,1), (2,2), (3,3), (1,2), (1,3), (2,3) in 3D.
  std::vector<std::array<int, 2>> pairs() const;
};

/// Throws ConfigError naming the first offending field.
void validate(const RunConfig& config);

/// Flat `key = value` lines grouped under `[section]` headers; `#` comments.
/// Unknown sections or keys and duplicates are errors. The result is
/// validated.
RunConfig parse_config(std::string_view text);
RunConfig read_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const RunConfig& config);

/// paper2d-accurate, paper2d-noisy50, paper2d-corners, paper3d-accurate,
/// paper3d-noisy10 and a `-small` variant of each.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace aet
