#pragma once

#include <optional>
#include <string>

#include "npi/certify.hpp"
#include "npi/monitors.hpp"
#include "npi/sim.hpp"

namespace npi {

// One scenario, end to end: certificate (for perturbed nonlinear-PI loops),
// run, outcome, and the monitors the scenario asks for. Numerical rejections
// (step-halving disagreement, quadrature failure) are recorded instead of
// propagating, so batch drivers can keep going.
struct RunResult {
  std::optional<CertificateReport> certificate;  // perturbed nonlinear-PI runs only
  std::optional<Trajectory> trajectory;
  std::optional<Outcome> outcome;
  std::optional<SSeries> s_monitor;
  std::optional<SBoundCheck> s_bound;
  std::optional<ZBoundCheck> z_bound;
  std::optional<ZdotBoundCheck> z_crossings;
  std::string error;  // nonempty when the run was rejected

  bool ok() const { return error.empty(); }
};

inline RunResult run_scenario(const Scenario& s, const SimulateOptions& opt = {}) {
  RunResult res;
  const bool certifiable = s.plant.kind == PlantKind::perturbed &&
                               s.controller.kind == ControllerKind::nonlinear_pi;
  try {
    if (certifiable) {
      CertifyOptions copt;
      copt.epsilon0 = s.epsilon0;
      res.certificate = certify(s.plant, s.controller, copt);
    }
    Trajectory tr = simulate(s, opt);
    if (s.s_monitor && certifiable && res.certificate && res.certificate->c_selected) {
      const SParams params{s.controller.lambda, s.plant.epsilon, s.plant.b, &s.controller.gain};
      const double c = *res.certificate->c_selected;
      auto series = s_series(tr, c, params);
      tr.S = series.S;
      res.s_bound = s_bound_check(tr, c, params);
      res.s_monitor = std::move(series);
    }
    if (s.z_bound_monitor && s.plant.kind == PlantKind::unperturbed &&
        s.controller.kind == ControllerKind::nonlinear_pi) {
      res.z_bound = z_bound_check(tr, s);
      if (s.controller.gain.has_envelope_inverse())
        res.z_crossings = z_dot_bound_check(tr, s.controller, s.plant);
    }
    res.outcome = detect_outcome(tr, s.outcome_tol);
    res.trajectory = std::move(tr);
  } catch (const AccuracyError& e) {
    res.error = e.what();
  } catch (const QuadratureError& e) {
    res.error = e.what();
  }
  return res;
}

}  // namespace npi
