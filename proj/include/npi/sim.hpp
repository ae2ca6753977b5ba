#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "npi/control.hpp"
#include "npi/plant.hpp"
#include "npi/trajectory.hpp"

namespace npi {

struct Scenario {
  std::string id;
  PlantConfig plant;
  ControllerConfig controller;
  double x0 = 0.0;  // unused for unperturbed plants
  double y0 = 0.0;
  double t_end = 50.0;
  double dt = 1e-3;
  double guard = 1e6;  // divergence guard on |x|, |y| and the controller state
  int record_every = 1;
  double outcome_tol = 1e-2;
  bool s_monitor = false;
  bool z_bound_monitor = false;
  double epsilon0 = 0.5;  // blend parameter handed to the certificate
};

inline void validate_scenario(const Scenario& s) {
  validate_plant(s.plant);
  validate_controller(s.controller);
  if (!(s.t_end > 0.0)) throw std::invalid_argument("scenario: t_end must be > 0");
  if (!(s.dt > 0.0)) throw std::invalid_argument("scenario: dt must be > 0");
  if (s.dt > s.t_end / 100.0)
    throw std::invalid_argument("scenario: dt must be <= t_end / 100");
  if (s.record_every < 1) throw std::invalid_argument("scenario: record_every must be >= 1");
  if (!(s.guard > 0.0)) throw std::invalid_argument("scenario: guard must be > 0");
  if (!(s.outcome_tol > 0.0)) throw std::invalid_argument("scenario: outcome_tol must be > 0");
}

struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class AccuracyCheck { enforce, record, skip };

struct SimulateOptions {
  AccuracyCheck accuracy = AccuracyCheck::enforce;
  double accuracy_tol = 1e-6;  // relative endpoint agreement between dt and dt/2
};

namespace detail {

struct LoopState {
  double x, y, w;  // w = q (nonlinear PI) or zeta (Nussbaum gain)
};

inline LoopState loop_rhs(const Scenario& s, const LoopState& st) {
  double u, dw;
  if (s.controller.kind == ControllerKind::nonlinear_pi) {
    const auto out = npi_control(st.y, st.w, s.controller);
    u = out.u;
    dw = out.dq;
  } else {
    const auto out = ng_control(st.y, st.w);
    u = out.u;
    dw = out.dzeta;
  }
  const auto pr = plant_rates(s.plant, st.x, st.y, u);
  return {pr.dx, pr.dy, dw};
}

inline double control_output(const Scenario& s, const LoopState& st) {
  if (s.controller.kind == ControllerKind::nonlinear_pi)
    return npi_control(st.y, st.w, s.controller).u;
  return ng_control(st.y, st.w).u;
}

struct RunResult {
  LoopState end;
  bool diverged = false;
  double diverged_at = std::numeric_limits<double>::quiet_NaN();
};

// Classical fixed-step RK4 over n steps; optionally records samples into tr.
inline RunResult run_rk4(const Scenario& s, double dt, long long n, int record_every,
                         Trajectory* tr) {
  LoopState st{s.plant.kind == PlantKind::perturbed ? s.x0 : 0.0, s.y0,
               s.controller.kind == ControllerKind::nussbaum_gain ? s.controller.zeta0 : 0.0};
  const bool is_npi = s.controller.kind == ControllerKind::nonlinear_pi;
  auto record = [&](long long i) {
    if (!tr) return;
    tr->t.push_back(static_cast<double>(i) * dt);
    tr->x.push_back(st.x);
    tr->y.push_back(st.y);
    tr->u.push_back(control_output(s, st));
    if (is_npi) {
      tr->zw.push_back(0.5 * st.y * st.y + s.controller.lambda * st.w);
      tr->q.push_back(st.w);
    } else {
      tr->zw.push_back(st.w);
    }
  };
  record(0);
  for (long long i = 0; i < n; ++i) {
    const LoopState k1 = loop_rhs(s, st);
    const LoopState k2 = loop_rhs(s, {st.x + 0.5 * dt * k1.x, st.y + 0.5 * dt * k1.y,
                                      st.w + 0.5 * dt * k1.w});
    const LoopState k3 = loop_rhs(s, {st.x + 0.5 * dt * k2.x, st.y + 0.5 * dt * k2.y,
                                      st.w + 0.5 * dt * k2.w});
    const LoopState k4 =
        loop_rhs(s, {st.x + dt * k3.x, st.y + dt * k3.y, st.w + dt * k3.w});
    st.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    st.y += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    st.w += dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    const bool finite = std::isfinite(st.x) && std::isfinite(st.y) && std::isfinite(st.w);
    if (!finite || std::max({std::abs(st.x), std::abs(st.y), std::abs(st.w)}) > s.guard) {
      if (finite) record(i + 1);  // keep the first offending sample when printable
      return {st, true, static_cast<double>(i + 1) * dt};
    }
    if ((i + 1) % record_every == 0 || i + 1 == n) record(i + 1);
  }
  return {st, false, std::numeric_limits<double>::quiet_NaN()};
}

}  // namespace detail

// Integrates the closed loop with fixed-step RK4. Non-diverged runs are
// re-integrated at dt/2 and the endpoint states must agree to
// accuracy_tol * (1 + |state|); a disagreement means the fixed step cannot be
// trusted for this scenario and raises AccuracyError (unless the check is
// set to record or skip).
inline Trajectory simulate(const Scenario& s, const SimulateOptions& opt = {}) {
  validate_scenario(s);
  const long long n = std::llround(s.t_end / s.dt);
  if (n < 1) throw std::invalid_argument("simulate: horizon shorter than one step");

  Trajectory tr;
  tr.dt = s.dt;
  tr.sample_dt = s.dt * s.record_every;
  tr.t_end = s.t_end;
  const auto base = detail::run_rk4(s, s.dt, n, s.record_every, &tr);
  tr.diverged = base.diverged;
  tr.diverged_at = base.diverged_at;

  if (!base.diverged && opt.accuracy != AccuracyCheck::skip) {
    const auto half = detail::run_rk4(s, 0.5 * s.dt, 2 * n, s.record_every, nullptr);
    if (half.diverged) {
      if (opt.accuracy == AccuracyCheck::enforce)
        throw AccuracyError("simulate: step-halved rerun diverged while the base run did not "
                            "(scenario '" + s.id + "', dt=" + std::to_string(s.dt) + ")");
      tr.halving_rel_err = std::numeric_limits<double>::infinity();
    } else {
      const double scale =
          1.0 + std::max({std::abs(base.end.x), std::abs(base.end.y), std::abs(base.end.w)});
      const double diff = std::max({std::abs(base.end.x - half.end.x),
                                    std::abs(base.end.y - half.end.y),
                                    std::abs(base.end.w - half.end.w)});
      tr.halving_rel_err = diff / scale;
      if (opt.accuracy == AccuracyCheck::enforce && tr.halving_rel_err > opt.accuracy_tol)
        throw AccuracyError(
            "simulate: step-halving disagreement " + std::to_string(tr.halving_rel_err) +
            " exceeds " + std::to_string(opt.accuracy_tol) + " (scenario '" + s.id +
            "', dt=" + std::to_string(s.dt) + "); the fixed-step result is not trustworthy");
    }
  }
  return tr;
}

enum class Verdict { converged, bounded_not_converged, diverged };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::bounded_not_converged: return "bounded_not_converged";
    case Verdict::diverged: return "diverged";
  }
  return "?";
}

struct Outcome {
  Verdict verdict = Verdict::bounded_not_converged;
  double sup_abs_y = 0.0;
  double tail_max = 0.0;  // max of |x|, |y| over the final 10% of the horizon
  double diverged_at = std::numeric_limits<double>::quiet_NaN();
};

// converged: guard never tripped and max(|x|,|y|) < tol over the last 10% of
// the horizon. diverged: guard tripped. Otherwise bounded_not_converged.
inline Outcome detect_outcome(const Trajectory& tr, double tol = 1e-2) {
  if (!(tol > 0.0)) throw std::invalid_argument("detect_outcome: tol must be > 0");
  Outcome out;
  out.diverged_at = tr.diverged_at;
  double sup_y = 0.0;
  double tail = -1.0;
  const double window = 0.9 * tr.t_end;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    sup_y = std::max(sup_y, std::abs(tr.y[i]));
    if (tr.t[i] >= window)
      tail = std::max(tail, std::max(std::abs(tr.x[i]), std::abs(tr.y[i])));
  }
  out.sup_abs_y = sup_y;
  out.tail_max = tail >= 0.0 ? tail : std::numeric_limits<double>::infinity();
  if (tr.diverged)
    out.verdict = Verdict::diverged;
  else if (out.tail_max < tol)
    out.verdict = Verdict::converged;
  else
    out.verdict = Verdict::bounded_not_converged;
  return out;
}

}  // namespace npi
