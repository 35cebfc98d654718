#pragma once

#include "aet/config.hpp"
#include "aet/field_io.hpp"
#include "aet/phantom.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace aet {

/// Result of one pipeline stage. `manifest` is also written to
/// `<out>/manifest.txt`; it holds the full configuration, input and output
/// hashes, and nothing that varies between runs (no time, host or job count).
struct StageReport {
  Metadata manifest;
  std::vector<std::string> outputs;  // file names relative to the stage directory
  bool ok = true;
  std::string error;
};

/// Builtin name, "identity" (sigma = 1) or path to a phantom file.
PhantomSpec load_phantom(const RunConfig& config);

/// Writes phantom.txt plus ln sigma and sigma on the forward grid and the
/// ground truth ln sigma on the reconstruction grid (truth_ln_sigma.aetf).
StageReport run_phantom(const RunConfig& config, const std::filesystem::path& out);

/// 2D: one sinogram per current pair (sinogram_ij.aetf), physical or
/// linearized per config. 3D: the six power densities of the forward grid
/// restricted to the reconstruction grid (m_ij.aetf). Noise, when requested,
/// is added per file with seed + file index. Also writes the ground truth.
StageReport run_simulate(const RunConfig& config, const std::filesystem::path& out);

/// Focuses every sinogram_ij.aetf of `in` onto the reconstruction grid,
/// writing m_ij.aetf.
StageReport run_focus(const RunConfig& config, const std::filesystem::path& in, const std::filesystem::path& out);

/// Reconstructs from m_ij.aetf in `in`, focusing sinograms first if only
/// those are present. Writes sigma_k.aetf per iterate, sigma.aetf (final)
/// and history.csv; ln sigma errors are included when `in` holds
/// truth_ln_sigma.aetf. Numeric failures leave the partial outputs and
/// report ok = false.
StageReport run_reconstruct(const RunConfig& config, const std::filesystem::path& in,
                            const std::filesystem::path& out);

/// name=value metrics of an estimate against a reference: rel_l2, max_error.
std::vector<std::pair<std::string, double>> field_metrics(const ScalarField& estimate, const ScalarField& reference);

/// Reads `<dir>/history.csv` back as name=value metrics (per-iteration
/// residual and error).
std::vector<std::pair<std::string, double>> history_metrics(const std::filesystem::path& dir);

std::string pair_name(std::array<int, 2> pair);

}  // namespace aet
