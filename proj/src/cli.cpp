#include "cwave/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwave/config.hpp"
#include "cwave/io.hpp"
#include "cwave/presets.hpp"

namespace cwave {

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_grids(const std::string& list) {
  std::vector<double> hs;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) hs.push_back(parse_spacing(item));
  require(!hs.empty(), "no grids given");
  return hs;
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06d.cwsnap", step);
  return buf;
}

int cmd_run(const std::string& config_path, std::ostream& out) {
  const RunConfig cfg = load_run_config(config_path);
  fs::create_directories(cfg.output_dir);
  nlohmann::json frames = nlohmann::json::array();
  const auto res = run_simulation(cfg, [&](const SnapshotFrame& f) {
    const auto path = cfg.output_dir / snapshot_name(f.step);
    write_snapshot(f, path);
    frames.push_back({{"t", f.t}, {"step", f.step}, {"path", path.string()}});
  });
  nlohmann::json summary;
  summary["preset"] = cfg.problem.name;
  summary["steps"] = res.steps;
  summary["t"] = res.t;
  summary["cfl_pass"] = res.cfl.pass;
  summary["snapshots"] = frames;
  if (res.energy) {
    const auto path = cfg.output_dir / "energy.csv";
    write_energy_csv(*res.energy, path);
    summary["energy_csv"] = path.string();
  }
  if (cfg.problem.exact) summary["max_error"] = final_error(cfg, res);
  out << summary.dump(2) << '\n';
  return 0;
}

int cmd_convergence(const std::string& preset, const std::string& grids, std::ostream& out) {
  write_convergence_csv(convergence_table(preset, parse_grids(grids)), out);
  return 0;
}

int cmd_stability(const std::string& config_path, std::ostream& out) {
  const RunConfig cfg = load_run_config(config_path);
  out << cfl_report_json(cfl_threshold(cfg.problem.model, cfg.tau)) << '\n';
  return 0;
}

int cmd_spectra(int n, std::ostream& out) {
  out << spectral_report_json(spectral_report<double>(n)) << '\n';
  return 0;
}

int cmd_presets(std::ostream& out) {
  for (const auto& p : list_presets()) out << p.name << '\t' << p.description << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compact fourth-order acoustic wave solver", "cwave"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a configured simulation; writes snapshots and energy CSV");
  run->add_option("config", config_path, "Config file")->required();

  std::string preset, grids;
  auto* conv = app.add_subcommand("convergence", "Error table h,tau,E,order as CSV");
  conv->add_option("preset", preset, "Preset with an analytic solution")->required();
  conv->add_option("--grids", grids, "Comma-separated spacings, e.g. 1/10,1/16 or pi/25,pi/50")
      ->required();

  auto* stab = app.add_subcommand("stability", "CFL report for a config as JSON");
  stab->add_option("config", config_path, "Config file")->required();

  int n = 0;
  auto* spec = app.add_subcommand("spectra", "Dense spectra of the compact operators as JSON");
  spec->add_option("--n", n, "Interior points per axis (2..64)")->required();

  auto* pres = app.add_subcommand("presets", "List builtin presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*run) return cmd_run(config_path, out);
    if (*conv) return cmd_convergence(preset, grids, out);
    if (*stab) return cmd_stability(config_path, out);
    if (*spec) return cmd_spectra(n, out);
    if (*pres) return cmd_presets(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Instability ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace cwave
