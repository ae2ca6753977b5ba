#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace npi {

// Uniformly sampled closed-loop record. The zw column is the controller's
// scalar: the PI square error z for nonlinear PI runs, zeta for Nussbaum-gain
// runs. q (the running ∫ y^2) is stored for PI runs only; S is attached by
// the Lyapunov monitor when requested.
struct Trajectory {
  std::vector<double> t, x, y, zw, u;
  std::vector<double> q;  // nonlinear PI runs only
  std::vector<double> S;  // filled by the S monitor, otherwise empty

  double dt = 0.0;            // integration step
  double sample_dt = 0.0;     // spacing of recorded samples (dt * record_every)
  double t_end = 0.0;         // requested horizon
  bool diverged = false;
  double diverged_at = std::numeric_limits<double>::quiet_NaN();
  // dt vs dt/2 endpoint agreement, relative; NaN when not evaluated.
  double halving_rel_err = std::numeric_limits<double>::quiet_NaN();

  bool has_q() const { return !q.empty(); }
  bool has_S() const { return !S.empty(); }
  std::size_t size() const { return t.size(); }
};

}  // namespace npi
