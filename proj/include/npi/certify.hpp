#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "npi/control.hpp"
#include "npi/gains.hpp"
#include "npi/plant.hpp"

namespace npi {

// Sufficient-condition checks for boundedness and attractivity of the
// perturbed sector-bounded loop under nonlinear PI control, mechanized as
// runnable numeric tests. Conditions:
//   (i)   eps*lambda < 1 and eps*(lambda + alpha2) < 1
//   (ii)  alpha2 - alpha1 <= 2 lambda / sqrt(1 - eps lambda) *
//           [ sqrt(1 - eps(lambda+alpha1)) + sqrt(1 - eps(lambda+alpha2)) ]
//   (iii) kappa has the Nussbaum property (finite-horizon scan verdict)
// plus positive definiteness of the quadratic-form matrix over the sector for
// a blended constant c between the roots of its second principal minor.

inline bool check_condition_i(double epsilon, double lambda, double alpha2) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("check_condition_i: epsilon must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("check_condition_i: lambda must be > 0");
  return epsilon * lambda < 1.0 && epsilon * (lambda + alpha2) < 1.0;
}

struct ConditionII {
  bool ok;
  double slack;  // RHS - (alpha2 - alpha1)
};

inline ConditionII check_condition_ii(double epsilon, double lambda, double alpha1,
                                      double alpha2) {
  if (!(alpha1 <= alpha2))
    throw std::invalid_argument("check_condition_ii: alpha1 must be <= alpha2");
  const double L = 1.0 - epsilon * lambda;
  const double r1 = 1.0 - epsilon * (lambda + alpha1);
  const double r2 = 1.0 - epsilon * (lambda + alpha2);
  if (!(L > 0.0) || r1 < 0.0 || r2 < 0.0)
    throw std::domain_error("check_condition_ii: condition (i) prerequisite violated");
  const double rhs = 2.0 * lambda / std::sqrt(L) * (std::sqrt(r1) + std::sqrt(r2));
  const double slack = rhs - (alpha2 - alpha1);
  return {slack >= 0.0, slack};
}

namespace detail {

inline double root_radical(double alpha, double epsilon, double lambda) {
  const double L = 1.0 - epsilon * lambda;
  const double r = 1.0 - epsilon * (lambda + alpha);
  if (!(L > 0.0) || r < 0.0)
    throw std::domain_error("root_c1/root_c2: negative radicand (condition (i) violated)");
  return 2.0 * lambda * std::sqrt(L * r);
}

}  // namespace detail

// The two roots (in c) of the second principal minor, c1 <= c2:
//   c1,2(alpha) = -M [ (1 - eps lambda)(2 lambda + alpha) -+ radical ]
inline double root_c1(double alpha, double epsilon, double lambda) {
  const double L = 1.0 - epsilon * lambda;
  return -(L * (2.0 * lambda + alpha) + detail::root_radical(alpha, epsilon, lambda)) / epsilon;
}

inline double root_c2(double alpha, double epsilon, double lambda) {
  const double L = 1.0 - epsilon * lambda;
  return -(L * (2.0 * lambda + alpha) - detail::root_radical(alpha, epsilon, lambda)) / epsilon;
}

// c := eps0 c1(alpha1) + (1 - eps0) c2(alpha2), eps0 in (0,1). Lies in the
// open interval (c1(alpha1), c2(alpha2)); errors when that interval is empty.
inline double select_c(double epsilon, double lambda, double alpha1, double alpha2,
                       double epsilon0 = 0.5) {
  if (!(epsilon0 > 0.0 && epsilon0 < 1.0))
    throw std::invalid_argument("select_c: epsilon0 must be in (0,1)");
  const double lo = root_c1(alpha1, epsilon, lambda);
  const double hi = root_c2(alpha2, epsilon, lambda);
  if (!(lo < hi)) throw std::domain_error("select_c: condition (ii) infeasible");
  return epsilon0 * lo + (1.0 - epsilon0) * hi;
}

struct Minors {
  double delta1;
  double delta2;
};

// Principal minors of the quadratic-form matrix at gain slope alpha:
//   delta1 = 1 - eps(lambda + alpha)
//   delta2 = delta1 (1 - eps lambda)(c eps^2 + 1)
//            - [c eps^2 + (1 - eps lambda)(2 - eps alpha)]^2 / 4
inline Minors lambda_minors(double alpha, double c, double epsilon, double lambda) {
  const double L = 1.0 - epsilon * lambda;
  const double d1 = 1.0 - epsilon * (lambda + alpha);
  const double ce2 = c * epsilon * epsilon;
  const double cross = ce2 + L * (2.0 - epsilon * alpha);
  const double d2 = d1 * L * (ce2 + 1.0) - 0.25 * cross * cross;
  return {d1, d2};
}

struct DiscriminantCheck {
  double lhs;  // B_c^2 - 4 A_c Gamma_c, evaluated term by term
  double rhs;  // closed form 16 eps^6 lambda^2 (1 - eps lambda)(1 - eps(lambda+alpha))
  bool ok;
};

// Verifies the closed-form discriminant identity of the quadratic (in c)
// behind delta2.
inline DiscriminantCheck discriminant_identity_check(double alpha, double epsilon,
                                                     double lambda) {
  const double L = 1.0 - epsilon * lambda;
  const double e2 = epsilon * epsilon;
  const double e3 = e2 * epsilon;
  const double a_c = e2 * e2;
  const double b_c = 2.0 * e3 * L * (alpha + 2.0 * lambda);
  const double g_c = e2 * L * alpha * (4.0 * lambda + L * alpha);
  const double lhs = b_c * b_c - 4.0 * a_c * g_c;
  const double rhs =
      16.0 * e3 * e3 * lambda * lambda * L * (1.0 - epsilon * (lambda + alpha));
  const bool ok = std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs));
  return {lhs, rhs, ok};
}

// z_k = (pi/2) [4k + 1 + sgn(b)]: the gain-valley levels where
// sgn(b) cos(z_k) = -1.
inline double zk(int k, double b) {
  if (b == 0.0) throw std::invalid_argument("zk: b must be nonzero");
  const double sgn = b > 0.0 ? 1.0 : -1.0;
  return 0.5 * M_PI * (4.0 * static_cast<double>(k) + 1.0 + sgn);
}

// Smallest k such that the gain envelope at 2k*pi dominates
// (max{|alpha1|,|alpha2|} + lambda)/|b|; rounded up so that the z-derivative
// bound is nonpositive at every z_k with k >= k0.
inline int k0_bound(const GainSpec& g, double b, double alpha1, double alpha2, double lambda) {
  if (!g.has_envelope_inverse())
    throw std::invalid_argument("k0_bound: gain '" + g.id + "' has no envelope inverse");
  if (b == 0.0) throw std::invalid_argument("k0_bound: b must be nonzero");
  const double threshold = (std::max(std::abs(alpha1), std::abs(alpha2)) + lambda) / std::abs(b);
  const double k = g.envelope_inverse(threshold) / (2.0 * M_PI);
  return static_cast<int>(std::ceil(k));
}

// ---- certificate assembly --------------------------------------------------

struct CertifyOptions {
  double epsilon0 = 0.5;
  int alpha_grid = 1001;         // minors checked on this many sector grid points
  double scan_z_max = 200.0 * M_PI;
  int scan_samples = 20000;
  ScanOptions scan = {};
  double relaxed_integral_threshold = 50.0;  // ∫ kappa must exceed +/- this on the scan
};

struct CertificateReport {
  bool cond_i = false;
  bool cond_ii = false;
  double cond_ii_slack = std::numeric_limits<double>::quiet_NaN();
  ScanVerdict cond_iii = ScanVerdict::bounded_average;
  double c1_at_alpha1 = std::numeric_limits<double>::quiet_NaN();
  double c2_at_alpha2 = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> c_selected;  // absent when infeasible
  double epsilon0_effective = std::numeric_limits<double>::quiet_NaN();
  double min_delta1 = std::numeric_limits<double>::quiet_NaN();
  double min_delta2 = std::numeric_limits<double>::quiet_NaN();
  bool relaxed_applicable = false;   // c2(alpha2) >= 0, i.e. alpha2 <= 0
  bool relaxed_property_ok = false;  // ∫ kappa unbounded both ways on the scan
  bool certified = false;
};

// Evaluates the full certificate for a perturbed plant under nonlinear PI
// control. The Nussbaum requirement (iii) may be satisfied either by the
// scan verdict or, when c2(alpha2) >= 0, by the relaxed (unscaled-integral)
// property.
//
// The blend for c starts from max{c1(alpha1), c1(alpha2)} rather than
// c1(alpha1): c1 is decreasing-then-increasing in alpha, so its maximum over
// the sector sits at an endpoint, and blending from the larger endpoint keeps
// c above c1(alpha) across the whole sector. The reported
// epsilon0_effective expresses the chosen c as a blend of
// (c1(alpha1), c2(alpha2)).
inline CertificateReport certify(const PlantConfig& plant, const ControllerConfig& ctrl,
                                 const CertifyOptions& opt = {}) {
  if (plant.kind != PlantKind::perturbed)
    throw std::invalid_argument("certify: only perturbed plants are covered");
  if (ctrl.kind != ControllerKind::nonlinear_pi)
    throw std::invalid_argument("certify: only nonlinear PI controllers are covered");
  validate_plant(plant);
  validate_controller(ctrl);

  const double eps = plant.epsilon;
  const double lam = ctrl.lambda;
  const double a1 = plant.f.alpha1;
  const double a2 = plant.f.alpha2;

  CertificateReport rep;
  rep.cond_i = check_condition_i(eps, lam, a2);
  try {
    const auto cii = check_condition_ii(eps, lam, a1, a2);
    rep.cond_ii = cii.ok;
    rep.cond_ii_slack = cii.slack;
  } catch (const std::domain_error&) {
    rep.cond_ii = false;  // radicand negative: (i) already failed
  }

  const auto st = detail::scan_gain_grid(ctrl.gain, opt.scan_z_max, opt.scan_samples,
                                         opt.scan.quad_tol);
  {
    NussbaumScanReport scan;
    scan.sup_avg = st.sup_avg;
    scan.inf_avg = st.inf_avg;
    const double v = opt.scan.nussbaum_threshold;
    const double b = opt.scan.bounded_threshold;
    if (st.sup_avg > v && st.inf_avg < -v)
      rep.cond_iii = ScanVerdict::consistent_with_nussbaum;
    else if (std::abs(st.sup_avg) < b && std::abs(st.inf_avg) < b)
      rep.cond_iii = ScanVerdict::bounded_average;
    else
      rep.cond_iii = ScanVerdict::consistent_with_relaxed_only;
  }
  rep.relaxed_property_ok = st.sup_integral > opt.relaxed_integral_threshold &&
                            st.inf_integral < -opt.relaxed_integral_threshold;

  if (rep.cond_i) {
    rep.c1_at_alpha1 = root_c1(a1, eps, lam);
    rep.c2_at_alpha2 = root_c2(a2, eps, lam);
    rep.relaxed_applicable = rep.c2_at_alpha2 >= 0.0;
    if (rep.cond_ii && rep.c1_at_alpha1 < rep.c2_at_alpha2) {
      const double c_lo = std::max(rep.c1_at_alpha1, root_c1(a2, eps, lam));
      const double c = opt.epsilon0 * c_lo + (1.0 - opt.epsilon0) * rep.c2_at_alpha2;
      double min_d1 = HUGE_VAL, min_d2 = HUGE_VAL;
      const int n = std::max(2, opt.alpha_grid);
      for (int i = 0; i < n; ++i) {
        const double a = a1 + (a2 - a1) * static_cast<double>(i) / static_cast<double>(n - 1);
        const auto m = lambda_minors(a, c, eps, lam);
        min_d1 = std::min(min_d1, m.delta1);
        min_d2 = std::min(min_d2, m.delta2);
      }
      rep.min_delta1 = min_d1;
      rep.min_delta2 = min_d2;
      if (min_d1 > 0.0 && min_d2 > 0.0) {
        rep.c_selected = c;
        rep.epsilon0_effective =
            (rep.c2_at_alpha2 - c) / (rep.c2_at_alpha2 - rep.c1_at_alpha1);
      }
    }
  }

  const bool nussbaum_ok = rep.cond_iii == ScanVerdict::consistent_with_nussbaum ||
                           (rep.relaxed_applicable && rep.relaxed_property_ok);
  rep.certified = rep.cond_i && rep.cond_ii && rep.c_selected.has_value() && nussbaum_ok;
  return rep;
}

inline std::string render_report(const CertificateReport& r) {
  std::ostringstream out;
  out.precision(17);
  auto yn = [](bool v) { return v ? "true" : "false"; };
  out << "cond_i=" << yn(r.cond_i) << '\n';
  out << "cond_ii=" << yn(r.cond_ii) << '\n';
  out << "cond_ii_slack=" << r.cond_ii_slack << '\n';
  out << "cond_iii=" << to_string(r.cond_iii) << '\n';
  out << "c1_at_alpha1=" << r.c1_at_alpha1 << '\n';
  out << "c2_at_alpha2=" << r.c2_at_alpha2 << '\n';
  if (r.c_selected)
    out << "c_selected=" << *r.c_selected << '\n';
  else
    out << "c_selected=none\n";
  out << "epsilon0_effective=" << r.epsilon0_effective << '\n';
  out << "min_delta1=" << r.min_delta1 << '\n';
  out << "min_delta2=" << r.min_delta2 << '\n';
  out << "relaxed_applicable=" << yn(r.relaxed_applicable) << '\n';
  out << "relaxed_property_ok=" << yn(r.relaxed_property_ok) << '\n';
  out << "certified=" << yn(r.certified) << '\n';
  return out.str();
}

}  // namespace npi
