#include "aet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace aet {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key, "not a valid number: '" + v + "'");
  return out;
}

double parse_auto(const std::string& key, const std::string& v) {
  return v == "auto" ? 0.0 : parse_number<double>(key, v);
}

std::vector<int> parse_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"experiment.name", [](RunConfig& c, const std::string&, const std::string& v) { c.name = v; }},
      {"experiment.dim", [](RunConfig& c, const std::string& k, const std::string& v) { c.dim = parse_number<int>(k, v); }},
      {"grid.forward_n",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.forward_n = parse_number<int>(k, v); }},
      {"grid.recon_n", [](RunConfig& c, const std::string& k, const std::string& v) { c.recon_n = parse_number<int>(k, v); }},
      {"phantom.name", [](RunConfig& c, const std::string&, const std::string& v) { c.phantom = v; }},
      {"probe.measurement",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "physical") c.measurement = SinogramKind::Physical;
         else if (v == "linearized") c.measurement = SinogramKind::Linearized;
         else throw ConfigError(k, "expected physical or linearized, got '" + v + "'");
       }},
      {"probe.transducers",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.transducers = parse_number<int>(k, v); }},
      {"probe.radii", [](RunConfig& c, const std::string& k, const std::string& v) { c.radii = parse_number<int>(k, v); }},
      {"probe.circle_radius",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.circle_radius = parse_number<double>(k, v); }},
      {"probe.t_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_max = parse_auto(k, v); }},
      {"probe.width", [](RunConfig& c, const std::string& k, const std::string& v) { c.width = parse_auto(k, v); }},
      {"probe.amplitude",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.amplitude = parse_number<double>(k, v); }},
      {"noise.level",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.noise_level = parse_number<double>(k, v); }},
      {"noise.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"reconstruction.currents",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.currents = parse_list(k, v); }},
      {"reconstruction.iterations",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.iterations = parse_number<int>(k, v); }},
      {"reconstruction.mode",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.mode = parse_mode3d(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k, e.what());
         }
       }},
      {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
  };
  return table;
}

int builtin_dim(const std::string& name) {
  if (name == "table1-2d" || name == "corners-2d") return 2;
  if (name == "table2-3d") return 3;
  return 0;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

TransducerArray RunConfig::array() const {
  TransducerArray a;
  a.transducers = transducers;
  a.radii = radii;
  a.circle_radius = circle_radius;
  a.t_max = t_max > 0.0 ? t_max : 2.0 * circle_radius;
  a.width = width > 0.0 ? width : 3.0 * 2.0 / (forward_n - 1);
  return a;
}

std::vector<std::array<int, 2>> RunConfig::pairs() const {
  std::vector<std::array<int, 2>> out;
  for (int i : currents) out.push_back({i, i});
  for (std::size_t a = 0; a < currents.size(); ++a)
    for (std::size_t b = a + 1; b < currents.size(); ++b) out.push_back({currents[a], currents[b]});
  if (dim == 2 && out.size() == 3) std::swap(out[1], out[2]);  // (1,1), (1,2), (2,2)
  return out;
}

void validate(const RunConfig& c) {
  if (c.name.empty()) throw ConfigError("experiment.name", "must not be empty");
  if (c.dim != 2 && c.dim != 3) throw ConfigError("experiment.dim", "must be 2 or 3");
  if (c.forward_n < 9) throw ConfigError("grid.forward_n", "must be at least 9");
  if (c.recon_n < 9) throw ConfigError("grid.recon_n", "must be at least 9");
  if (c.recon_n > c.forward_n) throw ConfigError("grid.recon_n", "must not exceed grid.forward_n");
  if ((c.forward_n - 1) % (c.recon_n - 1) != 0) {
    throw ConfigError("grid.recon_n", "recon_n - 1 must divide forward_n - 1 so the coarse grid is a node subset");
  }
  if (c.phantom.empty()) throw ConfigError("phantom.name", "must not be empty");
  const int bd = builtin_dim(c.phantom);
  if (bd != 0 && bd != c.dim) {
    throw ConfigError("phantom.name", "builtin phantom '" + c.phantom + "' is " + std::to_string(bd) + "D");
  }
  // The probe only exists in 2D; 3D runs use focused fields directly.
  if (c.dim == 2) {
    if (c.transducers < 1) throw ConfigError("probe.transducers", "must be at least 1");
    if (c.radii < 2) throw ConfigError("probe.radii", "must be at least 2");
    if (!(c.circle_radius > std::sqrt(2.0))) throw ConfigError("probe.circle_radius", "must exceed sqrt(2)");
    if (!(c.t_max >= 0.0)) throw ConfigError("probe.t_max", "must be non-negative (0 or auto: 2 R_s)");
    if (!(c.width >= 0.0)) throw ConfigError("probe.width", "must be non-negative (0 or auto: 3 h)");
    if (!(c.circle_radius - c.array().width > std::sqrt(2.0))) {
      throw ConfigError("probe.width", "R_s - w must exceed sqrt(2)");
    }
  }
  if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude)) throw ConfigError("probe.amplitude", "must be positive");
  if (!(c.noise_level >= 0.0) || !std::isfinite(c.noise_level)) throw ConfigError("noise.level", "must be >= 0");
  std::set<int> seen(c.currents.begin(), c.currents.end());
  if (seen.size() != c.currents.size()) throw ConfigError("reconstruction.currents", "duplicate current");
  for (int j : c.currents) {
    if (j < 1 || j > c.dim) throw ConfigError("reconstruction.currents", "current index out of range 1.." + std::to_string(c.dim));
  }
  if (!std::is_sorted(c.currents.begin(), c.currents.end())) {
    throw ConfigError("reconstruction.currents", "must be listed in increasing order");
  }
  const bool slice_pair = c.dim == 3 && c.mode == Mode3D::Slice && c.currents == std::vector<int>{1, 2};
  if (static_cast<int>(c.currents.size()) != c.dim && !slice_pair) {
    throw ConfigError("reconstruction.currents",
                      c.dim == 2 ? "2D needs currents 1,2" : "3D full mode needs currents 1,2,3 (slice: 1,2)");
  }
  if (c.iterations < 0) throw ConfigError("reconstruction.iterations", "must be non-negative");
  if (c.out_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  std::string section;
  std::istringstream is{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", where + ": unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("", where + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", where + ": expected key = value");
    if (section.empty()) throw ConfigError("", where + ": key outside of a [section]");
    const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key (" + where + ")");
    if (!seen.insert(key).second) throw ConfigError(key, "given twice (" + where + ")");
    if (value.empty()) throw ConfigError(key, "missing value (" + where + ")");
    it->second(c, key, value);
  }
  validate(c);
  return c;
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[experiment]\nname = " << c.name << "\ndim = " << c.dim << "\n\n";
  os << "[grid]\nforward_n = " << c.forward_n << "\nrecon_n = " << c.recon_n << "\n\n";
  os << "[phantom]\nname = " << c.phantom << "\n\n";
  os << "[probe]\nmeasurement = " << (c.measurement == SinogramKind::Physical ? "physical" : "linearized")
     << "\ntransducers = " << c.transducers << "\nradii = " << c.radii
     << "\ncircle_radius = " << format_double(c.circle_radius)
     << "\nt_max = " << (c.t_max > 0.0 ? format_double(c.t_max) : "auto")
     << "\nwidth = " << (c.width > 0.0 ? format_double(c.width) : "auto")
     << "\namplitude = " << format_double(c.amplitude) << "\n\n";
  os << "[noise]\nlevel = " << format_double(c.noise_level) << "\nseed = " << c.seed << "\n\n";
  os << "[reconstruction]\ncurrents = " << join(c.currents) << "\niterations = " << c.iterations
     << "\nmode = " << to_string(c.mode) << "\n\n";
  os << "[output]\ndir = " << c.out_dir << "\n";
  return os.str();
}

RunConfig preset(std::string_view requested) {
  std::string name(requested);
  const bool small = name.size() > 6 && name.ends_with("-small");
  if (small) name.resize(name.size() - 6);

  RunConfig c;
  c.name = std::string(requested);
  c.out_dir = "out/" + c.name;
  if (name.starts_with("paper2d-")) {
    // 256 transducers on R_s = 1.6, 257 fronts, 513^2 forward, 129^2 inversion.
    c.dim = 2;
    c.forward_n = small ? 257 : 513;
    c.recon_n = small ? 65 : 129;
    c.measurement = small ? SinogramKind::Linearized : SinogramKind::Physical;
    c.currents = {1, 2};
    if (name == "paper2d-accurate") {
      c.phantom = "table1-2d";
      c.iterations = 1;
    } else if (name == "paper2d-noisy50") {
      c.phantom = "table1-2d";
      c.iterations = 1;
      c.noise_level = 0.5;
    } else if (name == "paper2d-corners") {
      c.phantom = "corners-2d";
      c.iterations = 4;
    } else {
      throw ConfigError("preset", "unknown preset '" + c.name + "'");
    }
  } else if (name.starts_with("paper3d-")) {
    // Focused fields from 257^3 forward solves; 129^3 inversion for the noisy run.
    c.dim = 3;
    c.phantom = "table2-3d";
    c.currents = {1, 2, 3};
    c.mode = Mode3D::Full;
    c.iterations = 5;
    if (name == "paper3d-accurate") {
      c.forward_n = small ? 65 : 257;
      c.recon_n = small ? 65 : 257;
    } else if (name == "paper3d-noisy10") {
      c.forward_n = small ? 65 : 257;
      c.recon_n = small ? 65 : 129;
      c.noise_level = 0.1;
    } else {
      throw ConfigError("preset", "unknown preset '" + c.name + "'");
    }
  } else {
    throw ConfigError("preset", "unknown preset '" + c.name + "'");
  }
  validate(c);
  return c;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const char* base : {"paper2d-accurate", "paper2d-noisy50", "paper2d-corners", "paper3d-accurate", "paper3d-noisy10"}) {
    out.emplace_back(base);
    out.emplace_back(std::string(base) + "-small");
  }
  return out;
}

}  // namespace aet
