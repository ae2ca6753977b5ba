#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "npi/certify.hpp"
#include "npi/sim.hpp"
#include "npi/trajectory.hpp"

namespace npi {

// Runtime monitors: the proof's inequalities evaluated along trajectories.

struct SParams {
  double lambda;
  double epsilon;
  double b;
  const GainSpec* gain;
};

struct SSeries {
  std::vector<double> S;
  double max_forward_difference;  // max over samples of (S_{i+1} - S_i) / dt
};

// S(t) = (lambda/2) x^2 + (M/2)(1 - eps lambda)(x - y)^2 + eps c z - b ∫0^z kappa,
// evaluated at every recorded sample of a perturbed nonlinear-PI run.
inline SSeries s_series(const Trajectory& tr, double c, const SParams& p) {
  if (!tr.has_q())
    throw std::invalid_argument("s_series: needs a nonlinear PI trajectory (no q recorded)");
  if (!(p.epsilon > 0.0))
    throw std::invalid_argument("s_series: needs a perturbed plant (epsilon > 0)");
  const double M = 1.0 / p.epsilon;
  const double L = 1.0 - p.epsilon * p.lambda;
  SSeries out;
  out.S.resize(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double x = tr.x[i];
    const double y = tr.y[i];
    const double z = tr.zw[i];
    out.S[i] = 0.5 * p.lambda * x * x + 0.5 * M * L * (x - y) * (x - y) +
               p.epsilon * c * z - p.b * gain_integral(*p.gain, z);
  }
  double max_fd = -HUGE_VAL;
  for (std::size_t i = 0; i + 1 < out.S.size(); ++i) {
    const double dt = tr.t[i + 1] - tr.t[i];
    max_fd = std::max(max_fd, (out.S[i + 1] - out.S[i]) / dt);
  }
  out.max_forward_difference = max_fd;
  return out;
}

struct SBoundCheck {
  bool ok;
  double worst_violation;  // max over samples of lhs - rhs (<= 0 when the bound holds)
};

// The integrated bound: at every sample,
//   lambda x^2 + M (1 - eps lambda)(x - y)^2  <=  2 S(0) - 2 eps c z + 2 b ∫0^z kappa
// with both sides evaluated independently from the trajectory.
inline SBoundCheck s_bound_check(const Trajectory& tr, double c, const SParams& p,
                                 double tol = 1e-9) {
  if (!tr.has_q())
    throw std::invalid_argument("s_bound_check: needs a nonlinear PI trajectory");
  const double M = 1.0 / p.epsilon;
  const double L = 1.0 - p.epsilon * p.lambda;
  const double z0 = tr.zw.front();
  const double x0 = tr.x.front();
  const double y0 = tr.y.front();
  const double s0 = 0.5 * p.lambda * x0 * x0 + 0.5 * M * L * (x0 - y0) * (x0 - y0) +
                    p.epsilon * c * z0 - p.b * gain_integral(*p.gain, z0);
  double worst = -HUGE_VAL;
  bool ok = true;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double x = tr.x[i];
    const double y = tr.y[i];
    const double z = tr.zw[i];
    const double lhs = p.lambda * x * x + M * L * (x - y) * (x - y);
    const double rhs = 2.0 * s0 - 2.0 * p.epsilon * c * z + 2.0 * p.b * gain_integral(*p.gain, z);
    worst = std::max(worst, lhs - rhs);
    if (lhs > rhs + tol * (1.0 + std::abs(rhs))) ok = false;
  }
  return {ok, worst};
}

struct ZdotBoundCheck {
  bool pass = true;
  int crossings = 0;
  double worst_slack = HUGE_VAL;  // min over crossings of bound - fd (>= -tol when passing)
};

// For unperturbed plants with a cosine-template gain: whenever z crosses a
// level z_k, the forward difference of z must not exceed
//   [max{|alpha1|,|alpha2|} + lambda - |b| alpha0(2 k pi)] y^2
// up to a discretization allowance. alpha0(2 k pi) equals kappa(2 k pi)
// because cos(2 k pi) = 1. Crossings are detected at the nearest samples by
// sign change, per-direction; exact event times are not located.
inline ZdotBoundCheck z_dot_bound_check(const Trajectory& tr, const ControllerConfig& ctrl,
                                        const PlantConfig& plant) {
  if (plant.kind != PlantKind::unperturbed)
    throw std::invalid_argument("z_dot_bound_check: only unperturbed plants are covered");
  if (ctrl.kind != ControllerKind::nonlinear_pi || !ctrl.gain.has_envelope_inverse())
    throw std::invalid_argument(
        "z_dot_bound_check: needs a nonlinear PI gain with a cosine-template envelope");
  if (!tr.has_q()) throw std::invalid_argument("z_dot_bound_check: no PI trajectory");

  const double max_alpha = std::max(std::abs(plant.f.alpha1), std::abs(plant.f.alpha2));
  const double sgn = plant.b > 0.0 ? 1.0 : -1.0;
  ZdotBoundCheck out;
  for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
    const double za = tr.zw[i];
    const double zb = tr.zw[i + 1];
    const double dt = tr.t[i + 1] - tr.t[i];
    // candidate levels z_k = (pi/2)(4k + 1 + sgn b) inside [min, max]
    const double lo = std::min(za, zb);
    const double hi = std::max(za, zb);
    const int k_lo = static_cast<int>(std::ceil((2.0 * lo / M_PI - 1.0 - sgn) / 4.0));
    const int k_hi = static_cast<int>(std::floor((2.0 * hi / M_PI - 1.0 - sgn) / 4.0));
    for (int k = std::max(k_lo, 0); k <= k_hi; ++k) {
      const double level = zk(k, plant.b);
      if ((za - level) * (zb - level) > 0.0) continue;
      const double fd = (zb - za) / dt;
      const double envelope = ctrl.gain.kappa(2.0 * M_PI * static_cast<double>(k));
      const double coeff = max_alpha + ctrl.lambda - std::abs(plant.b) * envelope;
      const double y2 = tr.y[i] * tr.y[i];
      const double bound = coeff * y2;
      // discretization allowance: local curvature of z plus the drift of y^2
      double tol = 1e-9 * (1.0 + std::abs(bound));
      if (i + 2 < tr.size())
        tol += std::abs(tr.zw[i + 2] - 2.0 * zb + za) / dt;
      tol += std::abs(coeff) * std::abs(tr.y[i + 1] * tr.y[i + 1] - y2);
      ++out.crossings;
      const double slack = bound + tol - fd;
      out.worst_slack = std::min(out.worst_slack, slack);
      if (slack < 0.0) out.pass = false;
    }
  }
  return out;
}

struct ZBoundCheck {
  bool ok = false;
  int k_prime = 0;
  double z_bound = 0.0;
  double max_z = 0.0;
};

// Unperturbed a-priori bound: z(t) <= z_{k'} with
// k' = max{k0, ceil(y(0)^2 / 4 pi)} along the whole trajectory.
inline ZBoundCheck z_bound_check(const Trajectory& tr, const Scenario& s) {
  if (s.plant.kind != PlantKind::unperturbed)
    throw std::invalid_argument("z_bound_check: only unperturbed plants are covered");
  const int k0 = k0_bound(s.controller.gain, s.plant.b, s.plant.f.alpha1, s.plant.f.alpha2,
                          s.controller.lambda);
  const int ky = static_cast<int>(std::ceil(s.y0 * s.y0 / (4.0 * M_PI)));
  ZBoundCheck out;
  out.k_prime = std::max(k0, ky);
  out.z_bound = zk(out.k_prime, s.plant.b);
  out.max_z = *std::max_element(tr.zw.begin(), tr.zw.end());
  out.ok = out.max_z <= out.z_bound + 1e-9 * (1.0 + std::abs(out.z_bound));
  return out;
}

}  // namespace npi
