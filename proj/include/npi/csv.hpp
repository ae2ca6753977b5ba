#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "npi/trajectory.hpp"

namespace npi {

// 17 significant digits: enough to round-trip an IEEE double exactly.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One row per sample: t,x,y,z_or_zeta,u[,S,q]. The header is mandatory; the
// optional columns appear when the trajectory carries them.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,x,y,z_or_zeta,u";
  if (tr.has_S()) out << ",S";
  if (tr.has_q()) out << ",q";
  out << '\n';
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << format_g17(tr.t[i]) << ',' << format_g17(tr.x[i]) << ',' << format_g17(tr.y[i]) << ','
        << format_g17(tr.zw[i]) << ',' << format_g17(tr.u[i]);
    if (tr.has_S()) out << ',' << format_g17(tr.S[i]);
    if (tr.has_q()) out << ',' << format_g17(tr.q[i]);
    out << '\n';
  }
}

}  // namespace npi
