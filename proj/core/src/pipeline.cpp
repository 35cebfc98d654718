#include "aet/pipeline.hpp"

#include "aet/focusing.hpp"
#include "aet/metrics.hpp"
#include "aet/recon2d.hpp"
#include "aet/recon3d.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace aet {
namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.txt";

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

class Stage {
public:
  Stage(std::string name, const RunConfig& config, fs::path out) : out_(std::move(out)) {
    fs::create_directories(out_);
    report_.manifest["stage"] = std::move(name);
    std::istringstream is(format_config(config));
    std::string line, section;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line.front() == '[') {
        section = line.substr(1, line.size() - 2);
        continue;
      }
      const auto eq = line.find(" = ");
      report_.manifest["config." + section + "." + line.substr(0, eq)] = line.substr(eq + 3);
    }
  }

  void input(const fs::path& path) {
    report_.manifest["input." + path.filename().string()] = file_hash(path);
    const auto side = sidecar_path(path);
    if (fs::exists(side)) report_.manifest["input." + side.filename().string()] = file_hash(side);
  }

  void field(const std::string& name, const ScalarField& f) {
    write_field(out_ / name, f);
    record(name);
  }

  void sinogram(const std::string& name, const Sinogram& s) {
    write_sinogram(out_ / name, s);
    record(name);
    record(sidecar_path(name).string());
  }

  void text(const std::string& name, const std::string& content) {
    std::ofstream os(out_ / name, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + (out_ / name).string() + " for writing");
    os << content;
    os.close();
    record(name);
  }

  void set(const std::string& key, const std::string& value) { report_.manifest[key] = value; }

  StageReport finish(bool ok = true, std::string error = {}) {
    report_.ok = ok;
    report_.error = std::move(error);
    report_.manifest["status"] = ok ? "ok" : "failed";
    if (!ok) report_.manifest["error"] = report_.error;
    write_metadata(out_ / kManifest, report_.manifest);
    return report_;
  }

  const fs::path& dir() const { return out_; }

private:
  void record(const std::string& name) {
    report_.outputs.push_back(name);
    report_.manifest["output." + name] = file_hash(out_ / name);
  }

  fs::path out_;
  StageReport report_;
};

Grid forward_grid(const RunConfig& c) { return Grid(c.dim, c.forward_n); }
Grid recon_grid(const RunConfig& c) { return Grid(c.dim, c.recon_n); }

void write_truth(Stage& stage, const RunConfig& c, const PhantomSpec& spec) {
  stage.field("truth_ln_sigma.aetf", rasterize(spec, recon_grid(c), PhantomOutput::LnSigma));
}

// Pair (i, j), i <= j, as measured with current i and weight j.
std::vector<Sinogram> simulate_sinograms(const RunConfig& c, const ScalarField& sigma) {
  const auto array = c.array();
  const auto pairs = c.pairs();
  std::vector<Sinogram> out;
  if (c.measurement == SinogramKind::Linearized) {
    std::vector<PotentialSolution> u;
    for (int j : c.currents) u.push_back(solve_potential(sigma, {j}));
    for (const auto& p : pairs) {
      const auto m = power_density(sigma, u[p[0] - 1], u[p[1] - 1]);
      out.push_back(measure_linearized(m, array, p));
    }
    return out;
  }
  PhysicalOptions opt;
  opt.amplitude = c.amplitude;
  for (const auto& p : pairs) out.push_back(measure_physical(sigma, p, array, opt));
  return out;
}

ScalarField log_of(const ScalarField& f) {
  ScalarField out = f;
  for (auto& v : out.values()) v = std::log(v);
  return out;
}

}  // namespace

std::string pair_name(std::array<int, 2> pair) { return std::to_string(pair[0]) + std::to_string(pair[1]); }

PhantomSpec load_phantom(const RunConfig& c) {
  if (c.phantom == "identity") return PhantomSpec{c.dim, {}};
  if (c.phantom == "table1-2d" || c.phantom == "table2-3d" || c.phantom == "corners-2d") {
    return builtin_phantom(c.phantom);
  }
  if (!fs::exists(c.phantom)) throw ConfigError("phantom.name", "not a builtin phantom and no such file: " + c.phantom);
  return read_phantom(c.phantom, c.dim);
}

StageReport run_phantom(const RunConfig& c, const fs::path& out) {
  validate(c);
  const auto spec = load_phantom(c);
  Stage stage("phantom", c, out);
  stage.text("phantom.txt", format_phantom(spec));
  stage.field("ln_sigma.aetf", rasterize(spec, forward_grid(c), PhantomOutput::LnSigma));
  stage.field("sigma.aetf", rasterize(spec, forward_grid(c), PhantomOutput::Sigma));
  write_truth(stage, c, spec);
  return stage.finish();
}

StageReport run_simulate(const RunConfig& c, const fs::path& out) {
  validate(c);
  const auto spec = load_phantom(c);
  Stage stage("simulate", c, out);
  stage.set("phantom.hash", content_hash(rasterize(spec, forward_grid(c), PhantomOutput::LnSigma).values()));
  write_truth(stage, c, spec);
  const ScalarField sigma = rasterize(spec, forward_grid(c), PhantomOutput::Sigma);
  try {
    if (c.dim == 2) {
      auto sinos = simulate_sinograms(c, sigma);
      for (std::size_t k = 0; k < sinos.size(); ++k) {
        auto s = c.noise_level > 0.0 ? add_noise(sinos[k], c.noise_level, c.seed + k) : sinos[k];
        stage.sinogram("sinogram_" + pair_name(s.pair) + ".aetf", s);
      }
    } else {
      std::vector<PotentialSolution> u;
      for (int j : c.currents) u.push_back(solve_potential(sigma, {j}));
      const auto pairs = c.pairs();
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& p = pairs[k];
        auto m = restrict_to(power_density(sigma, u[p[0] - 1], u[p[1] - 1]), recon_grid(c));
        if (c.noise_level > 0.0) m = add_noise(m, c.noise_level, c.seed + k);
        stage.field("m_" + pair_name(p) + ".aetf", m);
      }
    }
  } catch (const NumericError& e) {
    return stage.finish(false, e.what());
  }
  return stage.finish();
}

StageReport run_focus(const RunConfig& c, const fs::path& in, const fs::path& out) {
  validate(c);
  if (c.dim != 2) throw ConfigError("experiment.dim", "focusing is only defined for 2D sinograms");
  Stage stage("focus", c, out);
  const Grid grid = recon_grid(c);
  for (const auto& p : c.pairs()) {
    const fs::path path = in / ("sinogram_" + pair_name(p) + ".aetf");
    if (!fs::exists(path)) throw ConfigError("input", "missing " + path.string());
    stage.input(path);
    const Sinogram s = read_sinogram(path);
    if (s.pair != p) throw FormatError(path.string() + ": metadata pair does not match the file name");
    stage.field("m_" + pair_name(p) + ".aetf", focus(s, grid).field);
  }
  return stage.finish();
}

StageReport run_reconstruct(const RunConfig& c, const fs::path& in, const fs::path& out) {
  validate(c);
  const Grid grid = recon_grid(c);
  const auto pairs = c.pairs();

  // Focus first when the input holds sinograms only.
  fs::path fields_dir = in;
  bool have_fields = true;
  for (const auto& p : pairs) have_fields = have_fields && fs::exists(in / ("m_" + pair_name(p) + ".aetf"));
  if (!have_fields) {
    if (c.dim != 2) throw ConfigError("input", "missing focused fields m_ij.aetf in " + in.string());
    run_focus(c, in, out / "focused");
    fields_dir = out / "focused";
  }

  Stage stage("reconstruct", c, out);
  std::vector<ScalarField> m;
  for (const auto& p : pairs) {
    const fs::path path = fields_dir / ("m_" + pair_name(p) + ".aetf");
    stage.input(path);
    m.push_back(read_field(path));
    if (m.back().grid() != grid) {
      throw FormatError(path.string() + ": grid n=" + std::to_string(m.back().grid().n()) + ", dim " +
                        std::to_string(m.back().grid().dim()) + " does not match the configured reconstruction grid");
    }
  }
  const fs::path truth_path = in / "truth_ln_sigma.aetf";
  std::optional<ScalarField> truth;
  if (fs::exists(truth_path)) {
    stage.input(truth_path);
    truth = read_field(truth_path);
    require_same_grid(truth->grid(), grid, "truth");
  }

  const ScalarField sigma0(grid, 1.0);
  ReconResult r;
  if (c.dim == 2) {
    r = reconstruct2d({m[0], m[1], m[2]}, sigma0, c.iterations);
  } else if (c.mode == Mode3D::Slice && m.size() == 3) {
    // Currents 1, 2 only: the unused fields stay empty.
    r = reconstruct3d({m[0], m[1], ScalarField(grid), m[2], ScalarField(grid), ScalarField(grid)}, sigma0,
                      c.iterations, Mode3D::Slice);
  } else {
    r = reconstruct3d({m[0], m[1], m[2], m[3], m[4], m[5]}, sigma0, c.iterations, c.mode);
  }

  std::ostringstream hist;
  hist << "iteration,residual" << (truth ? ",ln_sigma_rel_l2" : "") << '\n';
  for (std::size_t k = 0; k < r.iterates.size(); ++k) {
    stage.field("sigma_" + std::to_string(k) + ".aetf", r.iterates[k]);
    hist << k << ',' << (k < r.residual_history.size() ? num(r.residual_history[k]) : "nan");
    if (truth) hist << ',' << num(rel_l2(log_of(r.iterates[k]), *truth));
    hist << '\n';
  }
  stage.field("sigma.aetf", r.sigma);
  stage.text("history.csv", hist.str());
  return stage.finish(r.ok, r.error);
}

std::vector<std::pair<std::string, double>> field_metrics(const ScalarField& estimate, const ScalarField& reference) {
  return {{"rel_l2", rel_l2(estimate, reference)}, {"max_error", max_abs_diff(estimate, reference)}};
}

std::vector<std::pair<std::string, double>> history_metrics(const fs::path& dir) {
  std::ifstream is(dir / "history.csv");
  if (!is) throw ConfigError("input", "missing " + (dir / "history.csv").string());
  std::string line;
  std::getline(is, line);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  std::vector<std::pair<std::string, double>> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell, k;
    std::getline(ss, k, ',');
    for (std::size_t i = 1; i < cols.size() && std::getline(ss, cell, ','); ++i) {
      out.emplace_back(cols[i] + "_" + k, std::stod(cell));
    }
  }
  return out;
}

}  // namespace aet
