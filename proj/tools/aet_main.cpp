// aet: command line front end for the acousto-electric tomography pipeline.
//
//   aet simulate --preset paper2d-accurate-small --out run/sim
//   aet reconstruct --preset paper2d-accurate-small --in run/sim --out run/rec
//   aet export run/rec/sigma_1.aetf --kind pgm --out sigma1.pgm
//
// Exit codes: 0 success, 2 configuration or input error, 3 numeric failure.

#include "aet/config.hpp"
#include "aet/export.hpp"
#include "aet/field_io.hpp"
#include "aet/metrics.hpp"
#include "aet/parallel.hpp"
#include "aet/pipeline.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct Shared {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_shared(CLI::App* cmd, Shared& s) {
  cmd->add_option("--config", s.config, "Run configuration file");
  cmd->add_option("--preset", s.preset, "Named preset (see --list-presets)");
  cmd->add_option("--out", s.out, "Output directory (default: output.dir of the config)");
  cmd->add_option("--seed", s.seed, "Override noise.seed");
  cmd->add_option("--jobs", s.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

aet::RunConfig resolve(const Shared& s) {
  if (!s.config.empty() && !s.preset.empty()) throw aet::ConfigError("", "give either --config or --preset, not both");
  aet::RunConfig c;
  if (!s.config.empty()) c = aet::read_config(s.config);
  else if (!s.preset.empty()) c = aet::preset(s.preset);
  else throw aet::ConfigError("", "no configuration: pass --config FILE or --preset NAME");
  if (s.seed) c.seed = *s.seed;
  if (!s.out.empty()) c.out_dir = s.out;
  aet::validate(c);
  aet::set_jobs(s.jobs);
  return c;
}

int finish(const aet::StageReport& r, const fs::path& dir) {
  for (const auto& f : r.outputs) std::cout << (dir / f).string() << '\n';
  if (!r.ok) {
    std::cerr << "aet: numeric failure: " << r.error << " (partial outputs in " << dir.string() << ")\n";
    return kNumericError;
  }
  return kOk;
}

void print(const std::vector<std::pair<std::string, double>>& metrics) {
  std::cout << std::setprecision(10);
  for (const auto& [k, v] : metrics) std::cout << k << '=' << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acousto-electric tomography: simulation, synthetic focusing and conductivity reconstruction"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-presets", list, "Print the preset names and exit");

  Shared s;
  std::string in_dir;

  auto* phantom = app.add_subcommand("phantom", "Rasterize the phantom and ground truth");
  add_shared(phantom, s);
  auto* simulate = app.add_subcommand("simulate", "Simulate sinograms (2D) or power densities (3D)");
  add_shared(simulate, s);
  auto* focus = app.add_subcommand("focus", "Synthetic focusing of 2D sinograms");
  add_shared(focus, s);
  focus->add_option("--in", in_dir, "Directory written by simulate")->required();
  auto* recon = app.add_subcommand("reconstruct", "Reconstruct the conductivity");
  add_shared(recon, s);
  recon->add_option("--in", in_dir, "Directory with m_ij.aetf or sinogram_ij.aetf")->required();

  auto* exp = app.add_subcommand("export", "Render a field as PGM or a CSV profile");
  std::string field_path, kind = "pgm", export_out;
  std::optional<double> lo, hi;
  int plane = 0, axis = 0;
  double offset = 0.0;
  bool diagonal = false;
  exp->add_option("field", field_path, "AETF field file")->required()->check(CLI::ExistingFile);
  exp->add_option("--kind", kind, "pgm or csv-profile")->check(CLI::IsMember({"pgm", "csv-profile"}));
  exp->add_option("--out", export_out, "Output file")->required();
  exp->add_option("--lo", lo, "Window minimum (default: field min)");
  exp->add_option("--hi", hi, "Window maximum (default: field max)");
  exp->add_option("--plane", plane, "3D: 0 = Ox1x2, 1 = Ox1x3, 2 = Ox2x3")->check(CLI::Range(0, 2));
  exp->add_option("--axis", axis, "Profile direction (0 or 1)")->check(CLI::Range(0, 1));
  exp->add_option("--offset", offset, "Profile offset in the other coordinate");
  exp->add_flag("--diagonal", diagonal, "Diagonal profile from (-1,-1) to (1,1)");

  auto* met = app.add_subcommand("metrics", "Print name=value error metrics");
  std::string met_field, met_ref, met_dir;
  bool met_log = false;
  met->add_option("--field", met_field, "Estimate (AETF)");
  met->add_option("--reference", met_ref, "Reference (AETF)");
  met->add_flag("--log", met_log, "Compare ln of the estimate (sigma against ln sigma truth)");
  met->add_option("--dir", met_dir, "Reconstruction directory with history.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (list) {
      for (const auto& name : aet::preset_names()) std::cout << name << '\n';
      return kOk;
    }
    if (*phantom) {
      const auto c = resolve(s);
      return finish(aet::run_phantom(c, c.out_dir), c.out_dir);
    }
    if (*simulate) {
      const auto c = resolve(s);
      return finish(aet::run_simulate(c, c.out_dir), c.out_dir);
    }
    if (*focus) {
      const auto c = resolve(s);
      return finish(aet::run_focus(c, in_dir, c.out_dir), c.out_dir);
    }
    if (*recon) {
      const auto c = resolve(s);
      return finish(aet::run_reconstruct(c, in_dir, c.out_dir), c.out_dir);
    }
    if (*exp) {
      const auto f = aet::read_field(field_path);
      if (kind == "pgm") {
        aet::write_pgm(export_out, f, {lo, hi, plane});
      } else {
        aet::ProfileOptions o;
        o.kind = diagonal ? aet::ProfileKind::Diagonal : aet::ProfileKind::Axis;
        o.axis = axis;
        o.offset = offset;
        o.plane = plane;
        aet::write_profile_csv(export_out, aet::profile(f, o));
      }
      std::cout << export_out << '\n';
      return kOk;
    }
    if (*met) {
      if (!met_dir.empty()) print(aet::history_metrics(met_dir));
      if (!met_field.empty()) {
        if (met_ref.empty()) throw aet::ConfigError("--reference", "required with --field");
        auto est = aet::read_field(met_field);
        if (met_log)
          for (auto& v : est.values()) v = std::log(v);
        print(aet::field_metrics(est, aet::read_field(met_ref)));
      }
      if (met_dir.empty() && met_field.empty()) throw aet::ConfigError("", "metrics needs --dir or --field");
      return kOk;
    }
    std::cout << app.help();
    return kOk;
  } catch (const aet::NumericError& e) {
    std::cerr << "aet: numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const aet::ConfigError& e) {
    std::cerr << "aet: configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "aet: error: " << e.what() << '\n';
    return kConfigError;
  }
}
