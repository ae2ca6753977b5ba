#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace npi {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Richardson acceptance: the composite estimate gains a factor 16 per halving.
  if (std::abs(delta) <= 15.0 * eps || lm == a || rm == m)
    return left + right + delta / 15.0;
  if (depth >= max_depth)
    throw QuadratureError("adaptive Simpson quadrature did not converge on [" +
                          std::to_string(a) + ", " + std::to_string(b) +
                          "] after " + std::to_string(max_depth) +
                          " refinement levels (ill-behaved integrand?)");
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1, max_depth) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1, max_depth);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b].
//
// The interval is first cut into panels of at most unit width so that an
// oscillatory integrand cannot alias the acceptance test across several
// periods, and a cheap Simpson pre-pass over the panels sets the error
// scale: the total budget tol * (1 + |rough integral|) acts relatively for
// large integrals and absolutely when cancellation drives the value toward
// zero. The budget is then spread over the panels by width. Throws
// QuadratureError when max_depth refinement levels are not enough.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, tol, max_depth);
  const double width = b - a;
  const int panels = static_cast<int>(std::min(4096.0, std::ceil(width)));

  struct Panel {
    double a, b, fa, fm, fb, whole;
  };
  std::vector<Panel> grid(panels);
  double rough = 0.0;
  double f_right = f(a);
  for (int i = 0; i < panels; ++i) {
    Panel& p = grid[i];
    p.a = a + width * static_cast<double>(i) / panels;
    p.b = i + 1 == panels ? b : a + width * static_cast<double>(i + 1) / panels;
    p.fa = f_right;
    p.fm = f(0.5 * (p.a + p.b));
    p.fb = f(p.b);
    f_right = p.fb;
    p.whole = (p.b - p.a) / 6.0 * (p.fa + 4.0 * p.fm + p.fb);
    rough += p.whole;
  }
  const double budget = tol * (1.0 + std::abs(rough));
  double total = 0.0;
  for (const Panel& p : grid) {
    const double eps = budget * (p.b - p.a) / width;
    total += detail::simpson_rec(f, p.a, p.b, p.fa, p.fm, p.fb, p.whole, eps, 0, max_depth);
  }
  return total;
}

}  // namespace npi
