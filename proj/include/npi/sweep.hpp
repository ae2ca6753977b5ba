#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "npi/config.hpp"
#include "npi/csv.hpp"
#include "npi/run.hpp"

namespace npi {

// Parameter sweeps over {epsilon, lambda, gain} around a base scenario.
// Cells run concurrently; the table is assembled in grid order regardless of
// completion order, and per-cell failures land in the row instead of
// aborting the sweep.

struct GridSpec {
  Scenario base;
  std::string base_hash;
  std::vector<double> epsilons;     // empty: keep the base value
  std::vector<double> lambdas;      // empty: keep the base value
  std::vector<std::string> gains;   // empty: keep the base gain
  bool random = false;
  int count = 0;        // number of random cells
  std::uint64_t seed = 42;
  int workers = 0;      // 0: hardware concurrency (capped)
  std::size_t max_cells = 10000;
  bool simulate_cells = true;
};

namespace detail {

inline std::vector<double> parse_axis_values(const std::string& text, const std::string& key) {
  std::vector<double> out;
  if (text.rfind("linspace:", 0) == 0) {
    const std::string args = text.substr(9);
    double lo, hi;
    int n;
    char c1, c2;
    std::istringstream in(args);
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ',' || c2 != ',' || n < 2)
      throw std::invalid_argument("axis '" + key + "': expected linspace:lo,hi,n with n >= 2");
    for (int i = 0; i < n; ++i)
      out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
  }
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("axis '" + key + "': bad value '" + tok + "'");
    }
    if (pos != tok.size())
      throw std::invalid_argument("axis '" + key + "': bad value '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("axis '" + key + "': empty value list");
  return out;
}

inline std::vector<std::string> parse_axis_strings(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(tok.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace detail

// Grid config file: `base = <scenario file>` (relative to the grid file),
// `axis.epsilon` / `axis.lambda` (value list or linspace:lo,hi,n),
// `axis.gain` (id list), plus mode/count/seed/workers/max_cells.
inline GridSpec grid_from_config(const ConfigMap& cfg,
                                 const std::filesystem::path& grid_path) {
  GridSpec g;
  const auto base_rel = cfg.get_string("base");
  const auto base_path = grid_path.parent_path() / base_rel;
  const auto base_cfg = ConfigMap::parse_file(base_path);
  g.base = scenario_from_config(base_cfg);
  g.base_hash = base_cfg.hash();
  if (cfg.has("axis.epsilon"))
    g.epsilons = detail::parse_axis_values(cfg.get_string("axis.epsilon"), "axis.epsilon");
  if (cfg.has("axis.lambda"))
    g.lambdas = detail::parse_axis_values(cfg.get_string("axis.lambda"), "axis.lambda");
  if (cfg.has("axis.gain")) g.gains = detail::parse_axis_strings(cfg.get_string("axis.gain"));
  const std::string mode = cfg.get_string("mode", "grid");
  if (mode == "random")
    g.random = true;
  else if (mode != "grid")
    throw std::invalid_argument("sweep mode must be grid or random");
  g.count = cfg.get_int("count", 0);
  if (g.random && g.count < 0)
    throw std::invalid_argument("random sweep needs count >= 0");
  g.seed = static_cast<std::uint64_t>(cfg.get_double("seed", 42));
  g.workers = cfg.get_int("workers", 0);
  g.max_cells = static_cast<std::size_t>(cfg.get_int("max_cells", 10000));
  g.simulate_cells = cfg.get_bool("simulate", true);
  cfg.require_all_used();
  return g;
}

struct SweepCell {
  int index = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
  std::string gain_id;
  bool cond_i = false;
  bool cond_ii = false;
  double cond_ii_slack = std::numeric_limits<double>::quiet_NaN();
  std::string cond_iii;
  bool certified = false;
  double c_selected = std::numeric_limits<double>::quiet_NaN();
  std::string verdict;  // empty when not simulated
  double tail_max = std::numeric_limits<double>::quiet_NaN();
  double sup_abs_y = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

inline std::vector<SweepCell> run_sweep(const GridSpec& g) {
  struct CellParams {
    double epsilon, lambda;
    std::string gain;
  };
  std::vector<CellParams> cells;
  const bool npi_ctrl = g.base.controller.kind == ControllerKind::nonlinear_pi;
  const double base_eps = g.base.plant.epsilon;
  const double base_lam = g.base.controller.lambda;
  const std::string base_gain = npi_ctrl ? g.base.controller.gain.id : "";

  if (g.random) {
    // uniform within the [min,max] hull of each axis, gains drawn from the list
    std::mt19937_64 rng(g.seed);
    auto hull = [](const std::vector<double>& v, double fallback) {
      if (v.empty()) return std::pair<double, double>{fallback, fallback};
      auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return std::pair<double, double>{*lo, *hi};
    };
    const auto [e_lo, e_hi] = hull(g.epsilons, base_eps);
    const auto [l_lo, l_hi] = hull(g.lambdas, base_lam);
    std::uniform_real_distribution<double> de(e_lo, e_hi), dl(l_lo, l_hi);
    for (int i = 0; i < g.count; ++i) {
      CellParams c;
      c.epsilon = e_lo == e_hi ? e_lo : de(rng);
      c.lambda = l_lo == l_hi ? l_lo : dl(rng);
      c.gain = g.gains.empty()
                   ? base_gain
                   : g.gains[static_cast<std::size_t>(rng() % g.gains.size())];
      cells.push_back(std::move(c));
    }
  } else {
    const std::vector<double> eps_axis = g.epsilons.empty() ? std::vector<double>{base_eps}
                                                            : g.epsilons;
    const std::vector<double> lam_axis = g.lambdas.empty() ? std::vector<double>{base_lam}
                                                           : g.lambdas;
    const std::vector<std::string> gain_axis =
        g.gains.empty() ? std::vector<std::string>{base_gain} : g.gains;
    for (const auto& gv : gain_axis)
      for (const double le : lam_axis)
        for (const double ee : eps_axis) cells.push_back({ee, le, gv});
  }
  if (cells.size() > g.max_cells)
    throw std::invalid_argument("sweep: " + std::to_string(cells.size()) +
                                " cells exceed the configured bound of " +
                                std::to_string(g.max_cells));

  std::vector<SweepCell> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& row = rows[i];
      row.index = static_cast<int>(i);
      row.epsilon = cells[i].epsilon;
      row.lambda = cells[i].lambda;
      row.gain_id = cells[i].gain;
      try {
        Scenario s = g.base;
        s.id = g.base.id + "/cell" + std::to_string(i);
        s.plant.epsilon = cells[i].epsilon;
        if (npi_ctrl) {
          s.controller.lambda = cells[i].lambda;
          if (!cells[i].gain.empty()) s.controller.gain = parse_gain(cells[i].gain);
        }
        Scenario cert_only = s;
        cert_only.s_monitor = false;
        const RunResult res = g.simulate_cells ? run_scenario(cert_only)
                                               : RunResult{};
        std::optional<CertificateReport> cert = res.certificate;
        if (!g.simulate_cells && s.plant.kind == PlantKind::perturbed && npi_ctrl) {
          CertifyOptions copt;
          copt.epsilon0 = s.epsilon0;
          cert = certify(s.plant, s.controller, copt);
        }
        if (cert) {
          row.cond_i = cert->cond_i;
          row.cond_ii = cert->cond_ii;
          row.cond_ii_slack = cert->cond_ii_slack;
          row.cond_iii = to_string(cert->cond_iii);
          row.certified = cert->certified;
          if (cert->c_selected) row.c_selected = *cert->c_selected;
        }
        if (g.simulate_cells) {
          if (res.outcome) {
            row.verdict = to_string(res.outcome->verdict);
            row.tail_max = res.outcome->tail_max;
            row.sup_abs_y = res.outcome->sup_abs_y;
          }
          if (!res.ok()) row.error = res.error;
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  int nworkers = g.workers;
  if (nworkers <= 0)
    nworkers = static_cast<int>(std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
  nworkers = static_cast<int>(std::min<std::size_t>(nworkers, std::max<std::size_t>(1, cells.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& rows) {
  out << "index,epsilon,lambda,gain,cond_i,cond_ii,cond_ii_slack,cond_iii,certified,"
         "c_selected,verdict,tail_max,sup_abs_y,error\n";
  for (const auto& r : rows) {
    out << r.index << ',' << format_g17(r.epsilon) << ',' << format_g17(r.lambda) << ','
        << csv_escape(r.gain_id) << ',' << (r.cond_i ? "true" : "false") << ','
        << (r.cond_ii ? "true" : "false") << ',' << format_g17(r.cond_ii_slack) << ','
        << r.cond_iii << ',' << (r.certified ? "true" : "false") << ','
        << format_g17(r.c_selected) << ',' << r.verdict << ',' << format_g17(r.tail_max) << ','
        << format_g17(r.sup_abs_y) << ',' << csv_escape(r.error) << '\n';
  }
}

}  // namespace npi
