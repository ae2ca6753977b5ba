#pragma once

#include <cmath>
#include <stdexcept>

#include "npi/gains.hpp"

namespace npi {

enum class ControllerKind { nussbaum_gain, nonlinear_pi };

struct ControllerConfig {
  ControllerKind kind = ControllerKind::nonlinear_pi;
  double lambda = 2.5;  // PI leak, > 0 (nonlinear_pi only)
  GainSpec gain;        // kappa(z) (nonlinear_pi only)
  double zeta0 = 0.0;   // initial zeta (nussbaum_gain only)
};

inline void validate_controller(const ControllerConfig& c) {
  if (c.kind == ControllerKind::nonlinear_pi) {
    if (!(c.lambda > 0.0)) throw std::invalid_argument("controller: lambda must be > 0");
    if (!c.gain.kappa) throw std::invalid_argument("controller: nonlinear_pi needs a gain");
  }
}

struct ControllerState {
  double zeta = 0.0;  // Nussbaum adaptation variable
  double q = 0.0;     // running ∫0^t y^2, nondecreasing
};

struct NgOutput {
  double u;
  double dzeta;
};

// u = zeta^2 cos(zeta) y,  dzeta = y^2.
inline NgOutput ng_control(double y, double zeta) {
  return {zeta * zeta * std::cos(zeta) * y, y * y};
}

struct NpiOutput {
  double u;
  double z;
  double dq;
};

// z = y^2/2 + lambda q,  u = kappa(z) y,  dq = y^2. z is computed
// algebraically from (y, q) at every call; integrating z as its own state
// would drift away from this identity.
inline NpiOutput npi_control(double y, double q, const ControllerConfig& cfg) {
  const double z = 0.5 * y * y + cfg.lambda * q;
  return {cfg.gain.kappa(z) * y, z, y * y};
}

}  // namespace npi
