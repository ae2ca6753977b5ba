#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace npi {

enum class PlantKind { unperturbed, perturbed };

// f(x) = alpha(x) * x with alpha(x) confined to [alpha1, alpha2].
// The zero map (bounds [0,0]) encodes the pure integrator and f(x) = a*x the
// linear plant, so the certificate formulas apply uniformly.
struct SectorNonlinearity {
  std::string id;
  std::function<double(double)> f;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

inline double eval_f(const SectorNonlinearity& s, double x) { return s.f(x); }

inline SectorNonlinearity nonlinearity_zero() {
  return {"zero", [](double) { return 0.0; }, 0.0, 0.0};
}

inline SectorNonlinearity nonlinearity_linear(double a) {
  return {"linear:" + std::to_string(a), [a](double x) { return a * x; }, a, a};
}

// f(x) = a * (1 + sin^2 x) * x, sector [a, 2a] (order-normalized for a < 0).
inline SectorNonlinearity nonlinearity_sin2(double a) {
  SectorNonlinearity s;
  s.id = "sin2:" + std::to_string(a);
  s.f = [a](double x) {
    const double sx = std::sin(x);
    return a * (1.0 + sx * sx) * x;
  };
  s.alpha1 = std::min(a, 2.0 * a);
  s.alpha2 = std::max(a, 2.0 * a);
  return s;
}

// "zero" | "linear:<a>" | "sin2:<a>"
inline SectorNonlinearity parse_nonlinearity(const std::string& text) {
  if (text == "zero") return nonlinearity_zero();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    size_t pos = 0;
    double a;
    try {
      a = std::stod(arg, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("nonlinearity '" + text + "': bad parameter '" + arg + "'");
    }
    if (pos != arg.size())
      throw std::invalid_argument("nonlinearity '" + text + "': bad parameter '" + arg + "'");
    if (kind == "linear") return nonlinearity_linear(a);
    if (kind == "sin2") return nonlinearity_sin2(a);
  }
  throw std::invalid_argument("unknown nonlinearity '" + text +
                              "' (expected zero, linear:<a> or sin2:<a>)");
}

struct SectorCheck {
  bool pass = false;
  double worst_margin = 0.0;  // min over samples of dist(f(x)/x, [a1,a2]); negative = violation
};

// Samples f(x)/x on a uniform grid. Points inside the symmetric one-step
// neighborhood of 0 use the two-sided difference quotient toward 0 instead of
// dividing by a vanishing x.
inline SectorCheck verify_sector(const SectorNonlinearity& s, double x_min, double x_max, int n,
                                 double tol = 1e-9) {
  if (!(x_min < x_max)) throw std::invalid_argument("verify_sector: x_min must be < x_max");
  if (n < 2) throw std::invalid_argument("verify_sector: n must be >= 2");
  const double step = (x_max - x_min) / static_cast<double>(n - 1);
  double worst = HUGE_VAL;
  for (int i = 0; i < n; ++i) {
    const double x = x_min + step * static_cast<double>(i);
    double ratio;
    if (std::abs(x) < step) {
      ratio = (s.f(step) - s.f(-step)) / (2.0 * step);
    } else {
      ratio = s.f(x) / x;
    }
    const double margin = std::min(ratio - s.alpha1, s.alpha2 - ratio);
    worst = std::min(worst, margin);
  }
  const double scale = 1.0 + std::max(std::abs(s.alpha1), std::abs(s.alpha2));
  return {worst >= -tol * scale, worst};
}

struct PlantConfig {
  PlantKind kind = PlantKind::perturbed;
  SectorNonlinearity f;
  double b = 1.0;        // control coefficient, != 0
  double epsilon = 0.0;  // 1/M, > 0 when perturbed; unused otherwise

  double M() const { return 1.0 / epsilon; }
};

inline void validate_plant(const PlantConfig& p) {
  if (p.b == 0.0) throw std::invalid_argument("plant: b must be nonzero");
  if (p.kind == PlantKind::perturbed && !(p.epsilon > 0.0))
    throw std::invalid_argument("plant: epsilon must be > 0 for the perturbed plant");
  if (!(p.f.alpha1 <= p.f.alpha2))
    throw std::invalid_argument("plant: sector bounds must satisfy alpha1 <= alpha2");
}

struct PlantRates {
  double dx = 0.0;
  double dy = 0.0;
};

// Right-hand side of the plant ODEs. Perturbed: dx = f(x) + b u,
// dy = M (x - y) with M = 1/epsilon. Unperturbed: the x slot is unused and
// the single state obeys dy = f(y) + b u.
inline PlantRates plant_rates(const PlantConfig& p, double x, double y, double u) {
  if (p.kind == PlantKind::perturbed)
    return {p.f.f(x) + p.b * u, (x - y) / p.epsilon};
  return {0.0, p.f.f(y) + p.b * u};
}

}  // namespace npi
