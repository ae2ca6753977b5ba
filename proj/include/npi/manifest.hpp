#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "npi/run.hpp"

namespace npi {

struct RunManifest {
  std::string scenario_id;
  std::string config_hash;
  std::string csv_path;
  std::string svg_path;  // empty when no plot was emitted
  std::optional<CertificateReport> certificate;
  std::optional<Outcome> outcome;
  double halving_rel_err = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

inline nlohmann::json manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["scenario"] = m.scenario_id;
  j["config_hash"] = m.config_hash;
  j["csv"] = m.csv_path.empty() ? nlohmann::json() : nlohmann::json(m.csv_path);
  j["svg"] = m.svg_path.empty() ? nlohmann::json() : nlohmann::json(m.svg_path);
  if (m.certificate) {
    const auto& c = *m.certificate;
    nlohmann::json jc;
    jc["cond_i"] = c.cond_i;
    jc["cond_ii"] = c.cond_ii;
    jc["cond_ii_slack"] = c.cond_ii_slack;
    jc["cond_iii"] = to_string(c.cond_iii);
    jc["relaxed_applicable"] = c.relaxed_applicable;
    jc["relaxed_property_ok"] = c.relaxed_property_ok;
    if (c.c_selected)
      jc["c_selected"] = *c.c_selected;
    else
      jc["c_selected"] = nullptr;
    jc["min_delta1"] = c.min_delta1;
    jc["min_delta2"] = c.min_delta2;
    jc["certified"] = c.certified;
    j["certificate"] = jc;
  } else {
    j["certificate"] = "not_applicable";
  }
  if (m.outcome) {
    nlohmann::json jo;
    jo["verdict"] = to_string(m.outcome->verdict);
    jo["sup_abs_y"] = m.outcome->sup_abs_y;
    jo["tail_max"] = m.outcome->tail_max;
    if (m.outcome->verdict == Verdict::diverged) jo["diverged_at"] = m.outcome->diverged_at;
    if (std::isfinite(m.halving_rel_err)) jo["halving_rel_err"] = m.halving_rel_err;
    j["outcome"] = jo;
  } else {
    j["outcome"] = nullptr;
  }
  if (!m.error.empty()) j["error"] = m.error;
  return j;
}

inline void write_manifest(std::ostream& out, const RunManifest& m) {
  out << manifest_json(m).dump(2) << '\n';
}

}  // namespace npi
