// npictl: simulate and certify nonlinear PI / Nussbaum-gain control loops
// with fast first-order parasitic dynamics.
//
// Subcommands: simulate, certify, reproduce, sweep, nussbaum-scan.
// Exit codes: 0 success, 1 certificate infeasible, 2 run error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "npi/config.hpp"
#include "npi/csv.hpp"
#include "npi/manifest.hpp"
#include "npi/reproduce.hpp"
#include "npi/run.hpp"
#include "npi/svg.hpp"
#include "npi/sweep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitRunError = 2;

struct Overrides {
  std::optional<double> dt;
  std::optional<double> t_end;
};

npi::Scenario load_scenario(const std::string& path, const Overrides& ov, std::string* hash) {
  const auto cfg = npi::ConfigMap::parse_file(path);
  auto s = npi::scenario_from_config(cfg);
  if (ov.dt) s.dt = *ov.dt;
  if (ov.t_end) s.t_end = *ov.t_end;
  if (hash) *hash = cfg.hash();
  return s;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, bool emit_svg,
                 const Overrides& ov) {
  std::string hash;
  const auto s = load_scenario(config_path, ov, &hash);
  const auto res = npi::run_scenario(s);

  npi::RunManifest manifest;
  manifest.scenario_id = s.id;
  manifest.config_hash = hash;
  manifest.certificate = res.certificate;
  manifest.outcome = res.outcome;
  manifest.error = res.error;

  fs::create_directories(out_dir);
  if (res.trajectory) {
    manifest.halving_rel_err = res.trajectory->halving_rel_err;
    const fs::path csv = fs::path(out_dir) / (s.id + ".csv");
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    npi::write_trajectory_csv(out, *res.trajectory);
    manifest.csv_path = csv.string();
    if (emit_svg) {
      const fs::path svg = fs::path(out_dir) / (s.id + ".svg");
      std::ofstream sout(svg);
      std::vector<npi::SvgSeries> series{{"x", res.trajectory->t, res.trajectory->x},
                                         {"y", res.trajectory->t, res.trajectory->y},
                                         {"u", res.trajectory->t, res.trajectory->u}};
      npi::SvgChartOptions chart;
      chart.title = s.id;
      npi::write_line_chart(sout, series, chart);
      manifest.svg_path = svg.string();
    }
  }
  const fs::path mpath = fs::path(out_dir) / (s.id + ".manifest.json");
  std::ofstream mout(mpath);
  npi::write_manifest(mout, manifest);

  if (!res.ok()) {
    std::cerr << "run rejected: " << res.error << '\n';
    return kExitRunError;
  }
  const auto& o = *res.outcome;
  std::cout << "scenario=" << s.id << '\n'
            << "verdict=" << npi::to_string(o.verdict) << '\n'
            << "sup_abs_y=" << npi::format_g17(o.sup_abs_y) << '\n'
            << "tail_max=" << npi::format_g17(o.tail_max) << '\n';
  if (o.verdict == npi::Verdict::diverged)
    std::cout << "diverged_at=" << npi::format_g17(o.diverged_at) << '\n';
  std::cout << "csv=" << manifest.csv_path << '\n';
  return kExitOk;
}

int cmd_certify(const std::string& config_path) {
  const auto cfg = npi::ConfigMap::parse_file(config_path);
  const auto s = npi::scenario_from_config(cfg);
  npi::CertifyOptions opt;
  opt.epsilon0 = s.epsilon0;
  const auto rep = npi::certify(s.plant, s.controller, opt);
  std::cout << npi::render_report(rep);
  return rep.certified ? kExitOk : kExitInfeasible;
}

int cmd_reproduce(const std::string& figure, const std::string& presets_dir,
                  const std::string& out_dir, bool emit_svg, const Overrides& ov) {
  npi::ReproduceOptions opt;
  opt.emit_svg = emit_svg;
  opt.dt_override = ov.dt;
  opt.t_end_override = ov.t_end;
  const auto runs = npi::reproduce(figure, presets_dir, out_dir, opt);
  for (const auto& run : runs) {
    std::cout << run.id << ": ";
    if (!run.result.ok())
      std::cout << "rejected (" << run.result.error << ")";
    else
      std::cout << npi::to_string(run.result.outcome->verdict)
                << " tail_max=" << npi::format_g17(run.result.outcome->tail_max);
    if (run.result.certificate)
      std::cout << " certified=" << (run.result.certificate->certified ? "true" : "false");
    std::cout << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const std::string& grid_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed) {
  const auto cfg = npi::ConfigMap::parse_file(grid_path);
  auto grid = npi::grid_from_config(cfg, grid_path);
  if (seed) grid.seed = *seed;
  const auto rows = npi::run_sweep(grid);
  fs::create_directories(out_dir);
  const fs::path table = fs::path(out_dir) / (fs::path(grid_path).stem().string() + ".csv");
  std::ofstream out(table);
  if (!out) throw std::runtime_error("cannot write " + table.string());
  npi::write_sweep_csv(out, rows);
  std::cout << "cells=" << rows.size() << '\n' << "table=" << table.string() << '\n';
  return kExitOk;
}

int cmd_nussbaum_scan(const std::string& gain_id, double z_max, int samples) {
  const auto gain = npi::parse_gain(gain_id);
  const auto rep = npi::nussbaum_scan(gain, z_max, samples);
  std::cout << "gain=" << gain.id << '\n'
            << "z_max=" << npi::format_g17(rep.z_max) << '\n'
            << "samples=" << samples << '\n'
            << "sup_avg=" << npi::format_g17(rep.sup_avg) << '\n'
            << "inf_avg=" << npi::format_g17(rep.inf_avg) << '\n'
            << "verdict=" << npi::to_string(rep.verdict) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlinear PI / Nussbaum-gain control: closed-loop simulation and certification"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  std::string presets_dir = "presets";
  bool emit_svg = false;
  Overrides ov;
  double dt_flag = 0.0, t_end_flag = 0.0;

  app.add_option("--out-dir", out_dir, "output directory (default: out)");
  app.add_flag("--svg", emit_svg, "also emit SVG line charts");
  auto* dt_opt = app.add_option("--dt", dt_flag, "override the integration step");
  auto* te_opt = app.add_option("--t-end", t_end_flag, "override the horizon");

  std::string sim_config;
  auto* sim = app.add_subcommand("simulate", "run one scenario config and write CSV");
  sim->add_option("config", sim_config, "scenario config file")->required();

  std::string cert_config;
  auto* cert = app.add_subcommand("certify", "evaluate the sufficient-condition certificate");
  cert->add_option("config", cert_config, "scenario config file")->required();

  std::string figure;
  auto* rep = app.add_subcommand("reproduce", "run a bundled study (fig1 or fig2)");
  rep->add_option("figure", figure, "fig1 or fig2")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2"}));
  rep->add_option("--presets-dir", presets_dir, "directory holding the preset configs");

  std::string grid_config;
  std::uint64_t seed_flag = 0;
  auto* sw = app.add_subcommand("sweep", "run a parameter-grid sweep");
  sw->add_option("grid", grid_config, "grid config file")->required();
  auto* seed_opt = sw->add_option("--seed", seed_flag, "seed for randomized grids");

  std::string gain_id;
  double z_max = 200.0 * M_PI;
  int samples = 20000;
  auto* scan = app.add_subcommand("nussbaum-scan", "scan a gain's running average");
  scan->add_option("gain", gain_id, "gain id or poly:c0,c1,...:cos|sin")->required();
  scan->add_option("--zmax", z_max, "scan horizon (default 200*pi)");
  scan->add_option("--samples", samples, "grid samples (default 20000)");

  CLI11_PARSE(app, argc, argv);
  if (dt_opt->count()) ov.dt = dt_flag;
  if (te_opt->count()) ov.t_end = t_end_flag;

  try {
    if (sim->parsed()) return cmd_simulate(sim_config, out_dir, emit_svg, ov);
    if (cert->parsed()) return cmd_certify(cert_config);
    if (rep->parsed()) return cmd_reproduce(figure, presets_dir, out_dir, emit_svg, ov);
    if (sw->parsed())
      return cmd_sweep(grid_config, out_dir,
                       seed_opt->count() ? std::optional<std::uint64_t>(seed_flag)
                                         : std::nullopt);
    if (scan->parsed()) return cmd_nussbaum_scan(gain_id, z_max, samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunError;
  }
  return kExitRunError;
}
