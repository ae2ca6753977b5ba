#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "npi/quadrature.hpp"

namespace npi {

enum class GainClass { nussbaum, relaxed, neither };

// A PI gain function kappa(z) together with what is known about it: an
// optional closed-form antiderivative (all built-ins carry one) and, for
// gains of the form kappa(z) = alpha0(z) * cos(z) with alpha0 strictly
// increasing, the inverse of that envelope.
struct GainSpec {
  std::string id;
  std::function<double(double)> kappa;
  std::function<double(double)> integral;          // closed form of ∫0^z kappa, may be null
  std::function<double(double)> envelope_inverse;  // alpha0^{-1}, may be null
  GainClass claimed_class = GainClass::neither;

  bool has_integral() const { return static_cast<bool>(integral); }
  bool has_envelope_inverse() const { return static_cast<bool>(envelope_inverse); }
};

inline double eval_gain(const GainSpec& g, double z) { return g.kappa(z); }

// ∫0^z kappa(s) ds: closed form when the gain carries one, adaptive Simpson
// otherwise. Negative z is handled by the same antiderivative / signed
// quadrature.
inline double gain_integral(const GainSpec& g, double z, double quad_tol = 1e-10) {
  if (g.has_integral()) return g.integral(z);
  return integrate(g.kappa, 0.0, z, quad_tol);
}

enum class ScanVerdict { consistent_with_nussbaum, consistent_with_relaxed_only, bounded_average };

inline const char* to_string(ScanVerdict v) {
  switch (v) {
    case ScanVerdict::consistent_with_nussbaum: return "consistent_with_nussbaum";
    case ScanVerdict::consistent_with_relaxed_only: return "consistent_with_relaxed_only";
    case ScanVerdict::bounded_average: return "bounded_average";
  }
  return "?";
}

struct NussbaumScanReport {
  double z_max = 0.0;
  double sup_avg = 0.0;
  double inf_avg = 0.0;
  ScanVerdict verdict = ScanVerdict::bounded_average;
};

struct ScanOptions {
  double nussbaum_threshold = 10.0;  // sup_avg > +V and inf_avg < -V
  double bounded_threshold = 5.0;    // |avg| < B throughout
  double quad_tol = 1e-10;           // per-panel tolerance for gains without closed form
};

namespace detail {

// One pass over a uniform grid: extrema of the running average (1/z)∫0^z kappa
// and of the raw integral ∫0^z kappa. Gains without a closed form are
// integrated panel by panel and prefix-summed.
struct GainScanStats {
  double sup_avg, inf_avg;
  double sup_integral, inf_integral;
};

inline GainScanStats scan_gain_grid(const GainSpec& g, double z_max, int samples,
                                    double quad_tol) {
  GainScanStats st{-HUGE_VAL, HUGE_VAL, -HUGE_VAL, HUGE_VAL};
  const bool closed = g.has_integral();
  double prefix = 0.0;
  double z_prev = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double z = z_max * static_cast<double>(i) / static_cast<double>(samples);
    double integral;
    if (closed) {
      integral = g.integral(z);
    } else {
      prefix += integrate(g.kappa, z_prev, z, quad_tol);
      integral = prefix;
      z_prev = z;
    }
    const double avg = integral / z;
    st.sup_avg = std::max(st.sup_avg, avg);
    st.inf_avg = std::min(st.inf_avg, avg);
    st.sup_integral = std::max(st.sup_integral, integral);
    st.inf_integral = std::min(st.inf_integral, integral);
  }
  return st;
}

}  // namespace detail

// Scans the running average a(z) = (1/z)∫0^z kappa on a uniform grid over
// (0, z_max]. The verdict is a finite-horizon report, never a proof:
//   consistent_with_nussbaum  -- a(z) exceeded +V and fell below -V,
//   bounded_average           -- |a(z)| stayed below B throughout,
//   consistent_with_relaxed_only -- neither of the above.
inline NussbaumScanReport nussbaum_scan(const GainSpec& g, double z_max, int samples,
                                        const ScanOptions& opt = {}) {
  if (!(z_max > 0.0)) throw std::invalid_argument("nussbaum_scan: z_max must be > 0");
  if (samples < 100) throw std::invalid_argument("nussbaum_scan: samples must be >= 100");
  const auto st = detail::scan_gain_grid(g, z_max, samples, opt.quad_tol);
  NussbaumScanReport rep;
  rep.z_max = z_max;
  rep.sup_avg = st.sup_avg;
  rep.inf_avg = st.inf_avg;
  const double v = opt.nussbaum_threshold;
  const double b = opt.bounded_threshold;
  if (rep.sup_avg > v && rep.inf_avg < -v)
    rep.verdict = ScanVerdict::consistent_with_nussbaum;
  else if (std::abs(rep.sup_avg) < b && std::abs(rep.inf_avg) < b)
    rep.verdict = ScanVerdict::bounded_average;
  else
    rep.verdict = ScanVerdict::consistent_with_relaxed_only;
  return rep;
}

// Extrema of the unscaled integral ∫0^z kappa over the scan grid; used to
// test the relaxed property (integral unbounded in both directions).
struct IntegralExtrema {
  double sup_integral = 0.0;
  double inf_integral = 0.0;
};

inline IntegralExtrema integral_extrema_scan(const GainSpec& g, double z_max, int samples,
                                             double quad_tol = 1e-10) {
  if (!(z_max > 0.0)) throw std::invalid_argument("integral_extrema_scan: z_max must be > 0");
  if (samples < 100) throw std::invalid_argument("integral_extrema_scan: samples must be >= 100");
  const auto st = detail::scan_gain_grid(g, z_max, samples, quad_tol);
  return {st.sup_integral, st.inf_integral};
}

// ---- built-in gains --------------------------------------------------------

inline GainSpec gain_z_cos_z() {
  GainSpec g;
  g.id = "z_cos_z";
  g.kappa = [](double z) { return z * std::cos(z); };
  g.integral = [](double z) { return z * std::sin(z) + std::cos(z) - 1.0; };
  g.envelope_inverse = [](double x) { return x; };  // alpha0(z) = z
  g.claimed_class = GainClass::relaxed;
  return g;
}

inline GainSpec gain_z2_cos_z(const std::string& id = "z2_cos_z") {
  GainSpec g;
  g.id = id;
  g.kappa = [](double z) { return z * z * std::cos(z); };
  g.integral = [](double z) {
    return z * z * std::sin(z) + 2.0 * z * std::cos(z) - 2.0 * std::sin(z);
  };
  g.envelope_inverse = [](double x) { return std::sqrt(x); };  // alpha0(z) = z^2
  g.claimed_class = GainClass::nussbaum;
  return g;
}

inline GainSpec gain_z2_sin_z() {
  GainSpec g;
  g.id = "z2_sin_z";
  g.kappa = [](double z) { return z * z * std::sin(z); };
  g.integral = [](double z) {
    return -z * z * std::cos(z) + 2.0 * z * std::sin(z) + 2.0 * std::cos(z) - 2.0;
  };
  // No cosine-template envelope for the sine form.
  g.claimed_class = GainClass::nussbaum;
  return g;
}

// Custom gain grammar: "poly:c0,c1,...,cn:cos" or "poly:...:sin", meaning
// (c0 + c1 z + ... + cn z^n) * trig(z). Custom gains have no closed-form
// integral (quadrature is used) and no envelope.
inline GainSpec parse_custom_gain(const std::string& text) {
  const auto first = text.find(':');
  const auto last = text.rfind(':');
  if (text.compare(0, first, "poly") != 0 || first == std::string::npos || last == first)
    throw std::invalid_argument("unknown gain '" + text +
                                "' (expected a built-in id or poly:c0,c1,...:cos|sin)");
  const std::string coeff_str = text.substr(first + 1, last - first - 1);
  const std::string trig = text.substr(last + 1);
  if (trig != "cos" && trig != "sin")
    throw std::invalid_argument("custom gain '" + text + "': trig part must be cos or sin");
  std::vector<double> coeffs;
  std::istringstream in(coeff_str);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("custom gain '" + text + "': bad coefficient '" + tok + "'");
    }
    if (pos != tok.size())
      throw std::invalid_argument("custom gain '" + text + "': bad coefficient '" + tok + "'");
    coeffs.push_back(v);
  }
  if (coeffs.empty())
    throw std::invalid_argument("custom gain '" + text + "': no coefficients");
  const bool use_cos = (trig == "cos");
  GainSpec g;
  g.id = text;
  g.kappa = [coeffs, use_cos](double z) {
    double p = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * z + *it;
    return p * (use_cos ? std::cos(z) : std::sin(z));
  };
  g.claimed_class = GainClass::neither;
  return g;
}

// Resolves a gain id: built-ins first, then the custom expression grammar.
inline GainSpec parse_gain(const std::string& text) {
  if (text == "z_cos_z") return gain_z_cos_z();
  if (text == "z2_cos_z") return gain_z2_cos_z();
  if (text == "zeta2_cos_zeta") return gain_z2_cos_z("zeta2_cos_zeta");
  if (text == "z2_sin_z") return gain_z2_sin_z();
  return parse_custom_gain(text);
}

}  // namespace npi
