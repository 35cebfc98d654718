#include "aet/probe.hpp"

#include "aet/parallel.hpp"
#include "aet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace aet {
namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Distance range from z to the cube [-1,1]^dim (first two coordinates vary).
std::pair<double, double> cube_distance_range(const std::array<double, 3>& z, int dim) {
  double near2 = 0.0;
  double far2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double c = z[a];
    const double gap = std::max(0.0, std::abs(c) - 1.0);
    near2 += gap * gap;
    const double far = std::abs(c) + 1.0;
    far2 += far * far;
  }
  return {std::sqrt(near2), std::sqrt(far2)};
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

std::vector<double> scaled_gaussian(std::size_t count, double target_norm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(count);
  for (auto& v : noise) v = normal(rng);
  const double norm = std::sqrt(squared_norm(noise));
  const double scale = norm > 0.0 ? target_norm / norm : 0.0;
  for (auto& v : noise) v *= scale;
  return noise;
}

}  // namespace

std::array<double, 3> TransducerArray::center(int m) const {
  const double angle = 2.0 * std::numbers::pi * m / transducers;
  return {circle_radius * std::cos(angle), circle_radius * std::sin(angle), 0.0};
}

double TransducerArray::radius(int l) const { return t_max * l / (radii - 1); }

void TransducerArray::validate() const {
  if (transducers < 1) throw std::invalid_argument("probe: need at least one transducer");
  if (radii < 2) throw std::invalid_argument("probe: need at least two front radii");
  if (!(circle_radius > std::sqrt(2.0))) {
    throw std::invalid_argument("probe: transducer circle radius must exceed sqrt(2) to enclose the square");
  }
  if (!(width > 0.0)) throw std::invalid_argument("probe: mollifier width must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("probe: T_max must be positive");
}

TransducerArray reference_array(const Grid& measurement_grid) {
  TransducerArray a;
  a.width = 3.0 * measurement_grid.spacing();
  return a;
}

Sinogram make_sinogram(const TransducerArray& geometry, std::array<int, 2> pair, SinogramKind kind) {
  geometry.validate();
  Sinogram s;
  s.geometry = geometry;
  s.pair = pair;
  s.kind = kind;
  s.values.assign(static_cast<std::size_t>(geometry.transducers) * geometry.radii, 0.0);
  return s;
}

double mollifier_derivative(double s, double w) {
  if (std::abs(s) >= w) return 0.0;
  const double q = s / w;
  return -(15.0 / (4.0 * w * w * w)) * s * (1.0 - q * q);
}

ScalarField front_field(const std::array<double, 3>& z, double t, double w, const Grid& grid) {
  if (!(t > 0.0) || !(w > 0.0)) throw std::invalid_argument("front_field needs t > 0 and w > 0");
  const double scale = 1.0 / (2.0 * std::numbers::pi * std::max(t, w));
  ScalarField eta(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    double d2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) d2 += (x[a] - z[a]) * (x[a] - z[a]);
    eta[i] = scale * mollifier_derivative(t - std::sqrt(d2), w);
  }
  return eta;
}

Sinogram measure_linearized(const ScalarField& m, const TransducerArray& array, std::array<int, 2> pair) {
  const Grid& g = m.grid();
  if (g.dim() != 2) throw std::invalid_argument("measure_linearized needs a 2D field");
  Sinogram s = make_sinogram(array, pair, SinogramKind::Linearized);
  const auto weights = g.trapezoid_weights();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (m[i] != 0.0) support.push_back(i);
  }
  const int L = array.radii;
  const double dt = array.radius_step();
  const double w = array.width;
  std::vector<double> front_scale(L);
  for (int l = 0; l < L; ++l) front_scale[l] = 1.0 / (2.0 * std::numbers::pi * std::max(array.radius(l), w));

  parallel_for(static_cast<std::size_t>(array.transducers), [&](std::size_t mi) {
    const auto z = array.center(static_cast<int>(mi));
    double* row = s.values.data() + mi * L;
    for (std::size_t i : support) {
      const auto x = g.point(i);
      const double d = std::hypot(x[0] - z[0], x[1] - z[1]);
      const int lo = std::max(0, static_cast<int>(std::ceil((d - w) / dt)));
      const int hi = std::min(L - 1, static_cast<int>(std::floor((d + w) / dt)));
      const double mass = m[i] * weights[i];
      for (int l = lo; l <= hi; ++l) {
        row[l] += mass * front_scale[l] * mollifier_derivative(array.radius(l) - d, w);
      }
    }
  });
  return s;
}

std::vector<Sinogram> measure_physical(const ScalarField& sigma, int current, const std::vector<int>& weights,
                                       const TransducerArray& array, const PhysicalOptions& options) {
  const Grid& g = sigma.grid();
  if (g.dim() != 2) throw std::invalid_argument("measure_physical is two-dimensional");
  if (!(options.amplitude > 0.0)) throw std::invalid_argument("measure_physical needs a positive amplitude");
  array.validate();
  std::vector<Sinogram> out;
  for (int j : weights) out.push_back(make_sinogram(array, {current, j}, SinogramKind::Physical));

  const auto base = solve_potential(sigma, {current});
  const auto grad = potential_gradient(base);
  std::vector<VectorField> weight_grad;
  if (!options.face_quadrature) {
    for (int j : weights) {
      weight_grad.push_back(j == current ? grad : potential_gradient(solve_potential(sigma, {j})));
    }
  }
  const int L = array.radii;
  const double w = array.width;
  const double a = options.amplitude;

  parallel_for(static_cast<std::size_t>(array.transducers) * L, [&](std::size_t cell) {
    const int m = static_cast<int>(cell / L);
    const int l = static_cast<int>(cell % L);
    const double t = array.radius(l);
    const auto z = array.center(m);
    const auto [near, far] = cube_distance_range(z, g.dim());
    if (t + w <= near || t - w >= far || t <= 0.0) return;

    const ScalarField eta = front_field(z, t, w, g);
    ScalarField dsigma(g);
    bool touched = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (eta[i] != 0.0) {
        dsigma[i] = sigma[i] * std::expm1(a * eta[i]);
        touched = true;
      }
    }
    if (!touched) return;

    ScalarField rhs(g);
    ScalarField flux(g);
    for (int ax = 0; ax < g.dim(); ++ax) {
      for (std::size_t i = 0; i < g.size(); ++i) flux[i] = dsigma[i] * grad[ax][i];
      detail::sine_derivative_inplace(flux.data(), g, ax);
      rhs += flux;
    }
    const ConductivityOperator op(sigma + dsigma);
    ScalarField delta(g);
    const auto rep = op.solve(rhs, delta, options.tol, options.max_iter);
    if (!rep.converged) {
      throw NumericError("physical measurement at transducer " + std::to_string(m) + ", radius index " +
                         std::to_string(l) + ": solver stopped at residual " + std::to_string(rep.residual));
    }
    if (options.face_quadrature) {
      for (std::size_t k = 0; k < weights.size(); ++k) {
        out[k].at(m, l) = -boundary_functional(delta, {weights[k]}) / a;
      }
      return;
    }
    // grad(u') = grad(u_i) + Dc delta; reuse flux for the integrand.
    std::vector<ScalarField> perturbed;
    for (int ax = 0; ax < g.dim(); ++ax) perturbed.push_back(grad[ax] + spectral_derivative(delta, ax));
    for (std::size_t k = 0; k < weights.size(); ++k) {
      std::fill(flux.values().begin(), flux.values().end(), 0.0);
      for (int ax = 0; ax < g.dim(); ++ax) {
        const ScalarField& gj = weight_grad[k][ax];
        for (std::size_t i = 0; i < g.size(); ++i) flux[i] += dsigma[i] * perturbed[ax][i] * gj[i];
      }
      out[k].at(m, l) = integrate(flux) / a;
    }
  });
  return out;
}

Sinogram measure_physical(const ScalarField& sigma, std::array<int, 2> pair, const TransducerArray& array,
                          const PhysicalOptions& options) {
  return measure_physical(sigma, pair[0], {pair[1]}, array, options).front();
}

Sinogram add_noise(const Sinogram& s, double level, std::uint64_t seed) {
  if (level < 0.0) throw std::invalid_argument("noise level must be non-negative");
  Sinogram out = s;
  out.noise_level = level;
  out.seed = seed;
  if (level == 0.0) return out;
  const auto noise = scaled_gaussian(s.values.size(), level * std::sqrt(squared_norm(s.values)), seed);
  for (std::size_t i = 0; i < noise.size(); ++i) out.values[i] += noise[i];
  return out;
}

ScalarField add_noise(const ScalarField& f, double level, std::uint64_t seed) {
  if (level < 0.0) throw std::invalid_argument("noise level must be non-negative");
  ScalarField out = f;
  if (level == 0.0) return out;
  std::vector<double> v(f.values().begin(), f.values().end());
  const auto noise = scaled_gaussian(v.size(), level * std::sqrt(squared_norm(v)), seed);
  for (std::size_t i = 0; i < noise.size(); ++i) out[i] += noise[i];
  return out;
}

Metadata sinogram_metadata(const Sinogram& s) {
  return {
      {"pair", std::to_string(s.pair[0]) + "," + std::to_string(s.pair[1])},
      {"R_s", num(s.geometry.circle_radius)},
      {"T_max", num(s.geometry.t_max)},
      {"P", std::to_string(s.geometry.transducers)},
      {"L", std::to_string(s.geometry.radii)},
      {"w", num(s.geometry.width)},
      {"kind", s.kind == SinogramKind::Physical ? "physical" : "linearized"},
      {"seed", std::to_string(s.seed)},
      {"noise_level", num(s.noise_level)},
  };
}

void write_sinogram(const std::filesystem::path& path, const Sinogram& s) {
  RawArray a;
  a.dims = {static_cast<std::uint32_t>(s.geometry.transducers), static_cast<std::uint32_t>(s.geometry.radii)};
  a.values = s.values;
  write_array(path, a);
  write_metadata(sidecar_path(path), sinogram_metadata(s));
}

Sinogram read_sinogram(const std::filesystem::path& path) {
  RawArray a = read_array(path);
  if (a.dims.size() != 2) throw FormatError(path.string() + ": sinogram must be a 2D array");
  const Metadata meta = read_metadata(sidecar_path(path));
  auto get = [&](const std::string& key) {
    auto it = meta.find(key);
    if (it == meta.end()) throw FormatError(sidecar_path(path).string() + ": missing key '" + key + "'");
    return it->second;
  };
  Sinogram s;
  try {
    s.geometry.transducers = std::stoi(get("P"));
    s.geometry.radii = std::stoi(get("L"));
    s.geometry.circle_radius = std::stod(get("R_s"));
    s.geometry.t_max = std::stod(get("T_max"));
    s.geometry.width = std::stod(get("w"));
    const std::string pair = get("pair");
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw FormatError("bad pair '" + pair + "'");
    s.pair = {std::stoi(pair.substr(0, comma)), std::stoi(pair.substr(comma + 1))};
    s.noise_level = std::stod(get("noise_level"));
    s.seed = std::stoull(get("seed"));
  } catch (const std::logic_error& e) {
    throw FormatError(sidecar_path(path).string() + ": malformed value (" + e.what() + ")");
  }
  s.kind = get("kind") == "physical" ? SinogramKind::Physical : SinogramKind::Linearized;
  if (a.dims[0] != static_cast<std::uint32_t>(s.geometry.transducers) ||
      a.dims[1] != static_cast<std::uint32_t>(s.geometry.radii)) {
    throw FormatError(path.string() + ": array shape disagrees with P/L metadata");
  }
  s.values = std::move(a.values);
  s.geometry.validate();
  return s;
}

}  // namespace aet
