#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "npi/config.hpp"
#include "npi/csv.hpp"
#include "npi/manifest.hpp"
#include "npi/run.hpp"
#include "npi/svg.hpp"

namespace npi {

// The two bundled studies. fig1: perturbed integrator (P-INT) and perturbed
// linear plant (P-LS) under the Nussbaum-gain controller (NG) and the
// nonlinear PI controller with gains z cos z (nPI) and z^2 cos z (nPI-N).
// fig2: the sector-bounded plant under nonlinear PI with gain z^2 sin z.
// Presets are shipped as config files so they can be perturbed by hand.

inline const std::vector<std::string>& figure_preset_ids(const std::string& figure) {
  static const std::vector<std::string> fig1 = {"fig1_pint_ng",  "fig1_pint_npi",
                                                "fig1_pint_npin", "fig1_pls_ng",
                                                "fig1_pls_npi",   "fig1_pls_npin"};
  static const std::vector<std::string> fig2 = {"fig2_sector"};
  if (figure == "fig1") return fig1;
  if (figure == "fig2") return fig2;
  throw std::invalid_argument("reproduce: unknown figure '" + figure + "' (expected fig1 or fig2)");
}

struct ReproduceRun {
  std::string id;
  Scenario scenario;
  RunManifest manifest;
  RunResult result;
};

struct ReproduceOptions {
  bool emit_svg = false;
  std::optional<double> dt_override;
  std::optional<double> t_end_override;
};

inline std::vector<ReproduceRun> reproduce(const std::string& figure,
                                           const std::filesystem::path& presets_dir,
                                           const std::filesystem::path& out_dir,
                                           const ReproduceOptions& opt = {}) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<ReproduceRun> runs;
  for (const auto& id : figure_preset_ids(figure)) {
    ReproduceRun run;
    run.id = id;
    const auto cfg = ConfigMap::parse_file(presets_dir / (id + ".cfg"));
    run.scenario = scenario_from_config(cfg);
    if (opt.dt_override) run.scenario.dt = *opt.dt_override;
    if (opt.t_end_override) run.scenario.t_end = *opt.t_end_override;
    run.result = run_scenario(run.scenario);

    run.manifest.scenario_id = run.scenario.id;
    run.manifest.config_hash = cfg.hash();
    run.manifest.certificate = run.result.certificate;
    run.manifest.outcome = run.result.outcome;
    run.manifest.error = run.result.error;
    if (run.result.trajectory) {
      run.manifest.halving_rel_err = run.result.trajectory->halving_rel_err;
      const fs::path csv = out_dir / (id + ".csv");
      std::ofstream out(csv);
      if (!out) throw std::runtime_error("cannot write " + csv.string());
      write_trajectory_csv(out, *run.result.trajectory);
      run.manifest.csv_path = csv.string();
    }
    runs.push_back(std::move(run));
  }

  if (opt.emit_svg) {
    const fs::path svg = out_dir / (figure + ".svg");
    std::ofstream out(svg);
    if (!out) throw std::runtime_error("cannot write " + svg.string());
    if (figure == "fig1") {
      std::vector<SvgSeries> series;
      for (const auto& run : runs) {
        if (!run.result.trajectory) continue;
        series.push_back({run.id + " (" + (run.result.outcome
                                               ? to_string(run.result.outcome->verdict)
                                               : "rejected") + ")",
                          run.result.trajectory->t, run.result.trajectory->y});
      }
      SvgChartOptions chart;
      chart.title = "output y(t): perturbed integrator vs perturbed linear plant";
      chart.y_label = "y";
      chart.y_range = {{-10.0, 10.0}};
      write_line_chart(out, series, chart);
    } else {
      const auto& tr = runs.front().result.trajectory;
      std::vector<SvgSeries> series;
      if (tr) {
        series.push_back({"x", tr->t, tr->x});
        series.push_back({"y", tr->t, tr->y});
        series.push_back({"u", tr->t, tr->u});
      }
      SvgChartOptions chart;
      chart.title = "sector-bounded plant: states and control input";
      write_line_chart(out, series, chart);
    }
    for (auto& run : runs)
      if (run.result.trajectory) run.manifest.svg_path = svg.string();
  }

  for (const auto& run : runs) {
    const fs::path mpath = out_dir / (run.id + ".manifest.json");
    std::ofstream mout(mpath);
    if (!mout) throw std::runtime_error("cannot write " + mpath.string());
    write_manifest(mout, run.manifest);
  }
  return runs;
}

}  // namespace npi
