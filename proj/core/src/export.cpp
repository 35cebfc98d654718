#include "aet/export.hpp"

#include "aet/recon3d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace aet {
namespace {

ScalarField planar(const ScalarField& f, int plane) {
  if (f.grid().dim() == 3) return cross_section(f, plane);
  if (f.grid().dim() != 2) throw std::invalid_argument("export needs a 2D or 3D field");
  return f;
}

void write_text(const std::filesystem::path& path, const std::string& s) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << s;
}

}  // namespace

std::vector<std::uint8_t> gray_levels(const ScalarField& field, const PgmOptions& options) {
  const ScalarField f = planar(field, options.plane);
  const double lo = options.lo.value_or(f.min());
  const double hi = options.hi.value_or(f.max());
  if (!(hi > lo)) {
    throw std::invalid_argument("degenerate display window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const int n = f.grid().n();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n) * n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const double t = std::clamp((f[f.grid().index(col, n - 1 - row)] - lo) / (hi - lo), 0.0, 1.0);
      out[static_cast<std::size_t>(row) * n + col] = static_cast<std::uint8_t>(std::lround(255.0 * t));
    }
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const ScalarField& f, const PgmOptions& options) {
  const auto px = gray_levels(f, options);
  const int n = f.grid().n();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "P5\n" << n << ' ' << n << "\n255\n";
  os.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

std::vector<std::pair<double, double>> profile(const ScalarField& field, const ProfileOptions& options) {
  const ScalarField f = planar(field, options.plane);
  const Grid& g = f.grid();
  const int n = g.n();
  const double h = g.spacing();
  std::vector<std::pair<double, double>> out;
  if (options.kind == ProfileKind::Diagonal) {
    for (int k = 0; k < n; ++k) out.emplace_back(-1.0 + k * h, f[g.index(k, k)]);
    return out;
  }
  if (options.axis != 0 && options.axis != 1) throw std::out_of_range("profile axis must be 0 or 1");
  if (!(std::abs(options.offset) <= 1.0)) throw std::out_of_range("profile offset must lie in [-1, 1]");
  const int other = static_cast<int>(std::lround((options.offset + 1.0) / h));
  for (int k = 0; k < n; ++k) {
    const std::size_t i = options.axis == 0 ? g.index(k, other) : g.index(other, k);
    out.emplace_back(-1.0 + k * h, f[i]);
  }
  return out;
}

std::string format_profile_csv(const std::vector<std::pair<double, double>>& p) {
  std::ostringstream os;
  os << std::setprecision(17) << "coordinate,value\n";
  for (const auto& [x, v] : p) os << x << ',' << v << '\n';
  return os.str();
}

void write_profile_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& p) {
  write_text(path, format_profile_csv(p));
}

}  // namespace aet
