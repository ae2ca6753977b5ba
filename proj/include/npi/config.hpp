#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "npi/sim.hpp"

namespace npi {

// Scenario files are flat "dotted.key = value" text with '#' comments.
// Parsing is strict: duplicate or unrecognized keys are errors.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text, const std::string& origin = "<string>") {
    ConfigMap cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string stripped = trim(line);
      if (stripped.empty()) continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                    ": expected 'key = value'");
      const std::string key = trim(stripped.substr(0, eq));
      const std::string value = trim(stripped.substr(eq + 1));
      if (key.empty() || value.empty())
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                    ": empty key or value");
      if (cfg.kv_.count(key))
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                    key + "'");
      cfg.kv_[key] = value;
    }
    return cfg;
  }

  static ConfigMap parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end())
      throw std::invalid_argument(origin_ + ": missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  int get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double v = get_double(key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw std::invalid_argument(origin_ + ": key '" + key + "' must be an integer");
    return i;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument(origin_ + ": key '" + key + "' must be true or false");
  }

  // Errors out when the file holds keys nothing consumed (typo guard).
  void require_all_used() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k))
        throw std::invalid_argument(origin_ + ": unrecognized key '" + k + "'");
    }
  }

  // Canonical rendering: keys in sorted order, one per line. The config hash
  // is FNV-1a 64 over this rendering, so it is stable across key reordering
  // and comments.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
      out += k;
      out += '=';
      out += v;
      out += '\n';
    }
    return out;
  }

  std::string hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  const std::string& origin() const { return origin_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  double to_double(const std::string& key, const std::string& v) const {
    size_t pos = 0;
    double d;
    try {
      d = std::stod(v, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument(origin_ + ": key '" + key + "' has non-numeric value '" + v +
                                  "'");
    }
    if (pos != v.size())
      throw std::invalid_argument(origin_ + ": key '" + key + "' has non-numeric value '" + v +
                                  "'");
    return d;
  }

  std::string origin_;
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
};

inline Scenario scenario_from_config(const ConfigMap& cfg) {
  Scenario s;
  s.id = cfg.get_string("id");

  const std::string pk = cfg.get_string("plant.kind");
  if (pk == "perturbed")
    s.plant.kind = PlantKind::perturbed;
  else if (pk == "unperturbed")
    s.plant.kind = PlantKind::unperturbed;
  else
    throw std::invalid_argument(cfg.origin() + ": plant.kind must be perturbed or unperturbed");
  s.plant.f = parse_nonlinearity(cfg.get_string("plant.f"));
  s.plant.b = cfg.get_double("plant.b");
  if (s.plant.kind == PlantKind::perturbed)
    s.plant.epsilon = cfg.get_double("plant.epsilon");
  else if (cfg.has("plant.epsilon"))
    cfg.get_double("plant.epsilon");  // tolerated and ignored for unperturbed plants

  const std::string ck = cfg.get_string("controller.kind");
  if (ck == "nonlinear_pi") {
    s.controller.kind = ControllerKind::nonlinear_pi;
    s.controller.lambda = cfg.get_double("controller.lambda");
    s.controller.gain = parse_gain(cfg.get_string("controller.gain"));
  } else if (ck == "nussbaum_gain") {
    s.controller.kind = ControllerKind::nussbaum_gain;
    s.controller.zeta0 = cfg.get_double("controller.zeta0", 0.0);
  } else {
    throw std::invalid_argument(cfg.origin() +
                                ": controller.kind must be nonlinear_pi or nussbaum_gain");
  }

  s.x0 = cfg.get_double("init.x0", 0.0);
  s.y0 = cfg.get_double("init.y0");
  s.t_end = cfg.get_double("sim.t_end");
  s.dt = cfg.get_double("sim.dt");
  s.guard = cfg.get_double("sim.guard", 1e6);
  s.record_every = cfg.get_int("sim.record_every", 1);
  s.outcome_tol = cfg.get_double("outcome.tol", 1e-2);
  s.s_monitor = cfg.get_bool("monitors.s_monitor", false);
  s.z_bound_monitor = cfg.get_bool("monitors.z_bound_monitor", false);
  s.epsilon0 = cfg.get_double("certify.epsilon0", 0.5);

  cfg.require_all_used();
  validate_scenario(s);
  return s;
}

}  // namespace npi
