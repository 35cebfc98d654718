#pragma once

#include "aet/field_io.hpp"
#include "aet/forward.hpp"
#include "aet/grid.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aet {

/// P transducers on a circle of radius R_s around the origin and L front
/// radii t_l = l * T_max / (L-1).
struct TransducerArray {
  int transducers = 256;
  int radii = 257;
  double circle_radius = 1.6;
  double t_max = 3.2;
  double width = 0.0;  // mollifier half-width w

  std::array<double, 3> center(int m) const;
  double radius(int l) const;
  double radius_step() const { return t_max / (radii - 1); }

  /// Throws std::invalid_argument on R_s <= sqrt(2), w <= 0, P < 1 or L < 2.
  void validate() const;
};

/// 256 transducers on radius 1.6, 257 radii, w = 3 h of the given grid.
TransducerArray reference_array(const Grid& measurement_grid);

enum class SinogramKind { Physical, Linearized };

/// M(t_l, z_m) for one current pair; value (m, l) at index m * L + l.
struct Sinogram {
  TransducerArray geometry;
  std::array<int, 2> pair{1, 1};
  SinogramKind kind = SinogramKind::Linearized;
  std::vector<double> values;
  double noise_level = 0.0;
  std::uint64_t seed = 0;

  double& at(int m, int l) { return values[static_cast<std::size_t>(m) * geometry.radii + l]; }
  double at(int m, int l) const { return values[static_cast<std::size_t>(m) * geometry.radii + l]; }
};

Sinogram make_sinogram(const TransducerArray& geometry, std::array<int, 2> pair, SinogramKind kind);

/// Mollified front derivative phi_w'(s) with phi_w(s) = 15/(16w) (1-(s/w)^2)^2.
double mollifier_derivative(double s, double w);

/// eta_{t,z}(x) = phi_w'(t - |x-z|) / (2 pi max(t, w)).
ScalarField front_field(const std::array<double, 3>& z, double t, double w, const Grid& grid);

/// Trapezoid pairing of M with every front of the array.
Sinogram measure_linearized(const ScalarField& m, const TransducerArray& array, std::array<int, 2> pair = {1, 1});

struct PhysicalOptions {
  double amplitude = 1e-5;
  double tol = 1e-8;
  int max_iter = 500;
  // Evaluate the boundary functional by face quadrature instead of the
  // reciprocity identity. The face rule carries an O(1) error for fronts
  // tangent to the cube because x_j has no exact cosine representation.
  bool face_quadrature = false;
};

/// Nonlinear difference measurements for current i, one sinogram per weight
/// j in `weights`. Each front re-solves the forward problem for
/// sigma * exp(amplitude * eta) and stores the change of the boundary
/// functional divided by -amplitude, so values approximate
/// measure_linearized of the power density. By default the change is
/// evaluated as -int dsigma grad(u') . grad(u_j), which equals the boundary
/// difference exactly for the continuous problem.
std::vector<Sinogram> measure_physical(const ScalarField& sigma, int current, const std::vector<int>& weights,
                                       const TransducerArray& array, const PhysicalOptions& options = {});
Sinogram measure_physical(const ScalarField& sigma, std::array<int, 2> pair, const TransducerArray& array,
                          const PhysicalOptions& options = {});

/// Adds Gaussian noise rescaled so ||noise|| = level * ||input|| exactly.
Sinogram add_noise(const Sinogram& s, double level, std::uint64_t seed);
ScalarField add_noise(const ScalarField& f, double level, std::uint64_t seed);

Metadata sinogram_metadata(const Sinogram& s);
void write_sinogram(const std::filesystem::path& path, const Sinogram& s);
Sinogram read_sinogram(const std::filesystem::path& path);

}  // namespace aet
