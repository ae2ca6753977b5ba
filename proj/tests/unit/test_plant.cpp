#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "npi/plant.hpp"

TEST_CASE("sector map evaluation") {
  const auto s = npi::nonlinearity_sin2(3.0);
  CHECK(s.alpha1 == 3.0);
  CHECK(s.alpha2 == 6.0);
  CHECK(npi::eval_f(s, 0.0) == 0.0);
  // sin(pi/2) = 1 forces 3 * 2 * (pi/2)
  CHECK(npi::eval_f(s, M_PI / 2.0) == Catch::Approx(3.0 * M_PI).epsilon(1e-12));
  CHECK(npi::eval_f(npi::nonlinearity_linear(1.0), 4.0) == 4.0);
  CHECK(npi::eval_f(npi::nonlinearity_zero(), 123.0) == 0.0);
}

TEST_CASE("nonlinearity parsing") {
  CHECK(npi::parse_nonlinearity("zero").alpha2 == 0.0);
  const auto lin = npi::parse_nonlinearity("linear:-2.5");
  CHECK(lin.alpha1 == -2.5);
  CHECK(lin.f(2.0) == -5.0);
  const auto s = npi::parse_nonlinearity("sin2:3");
  CHECK(s.alpha1 == 3.0);
  CHECK(s.alpha2 == 6.0);
  // negative scale flips the sector bounds into order
  const auto neg = npi::parse_nonlinearity("sin2:-1");
  CHECK(neg.alpha1 == -2.0);
  CHECK(neg.alpha2 == -1.0);
  CHECK_THROWS_AS(npi::parse_nonlinearity("cubic:1"), std::invalid_argument);
  CHECK_THROWS_AS(npi::parse_nonlinearity("linear:x"), std::invalid_argument);
}

TEST_CASE("verify_sector accepts the sector-bounded map with near-zero margin") {
  const auto s = npi::nonlinearity_sin2(3.0);
  const auto chk = npi::verify_sector(s, -10.0, 10.0, 1001);
  CHECK(chk.pass);
  // alpha(x) = 3(1 + sin^2 x) spans exactly [3, 6]; on a 1001-point grid the
  // extremes are approached to within the grid resolution
  CHECK(chk.worst_margin >= 0.0);
  CHECK(chk.worst_margin <= 5e-3);
}

TEST_CASE("verify_sector rejects a map outside its claimed sector") {
  npi::SectorNonlinearity q{"x_squared", [](double x) { return x * x; }, 0.0, 1.0};
  const auto chk = npi::verify_sector(q, -1.0, 1.0, 101);
  CHECK_FALSE(chk.pass);  // f(x)/x = x < 0 for x < 0
  CHECK(chk.worst_margin < -0.9);
}

TEST_CASE("verify_sector on the zero map with a degenerate sector") {
  const auto chk = npi::verify_sector(npi::nonlinearity_zero(), -5.0, 5.0, 101);
  CHECK(chk.pass);
  CHECK(chk.worst_margin == 0.0);
}

TEST_CASE("verify_sector handles exact-width linear sectors despite rounding") {
  const auto chk = npi::verify_sector(npi::nonlinearity_linear(1.7), -3.0, 3.0, 301);
  CHECK(chk.pass);
}

TEST_CASE("plant rates follow the perturbed equations") {
  npi::PlantConfig p;
  p.kind = npi::PlantKind::perturbed;
  p.f = npi::nonlinearity_zero();
  p.b = 0.5;
  p.epsilon = 0.25;
  // x = y kills the filter term
  auto r = npi::plant_rates(p, 4.0, 4.0, 0.0);
  CHECK(r.dx == 0.0);
  CHECK(r.dy == 0.0);

  p.f = npi::nonlinearity_linear(1.0);
  r = npi::plant_rates(p, 4.0, 0.0, 2.0);
  CHECK(r.dx == Catch::Approx(5.0));   // 4 + 0.5 * 2
  CHECK(r.dy == Catch::Approx(16.0));  // (1/0.25) * (4 - 0)
}

TEST_CASE("unperturbed rates live in the y slot") {
  npi::PlantConfig p;
  p.kind = npi::PlantKind::unperturbed;
  p.f = npi::nonlinearity_linear(1.0);
  p.b = 1.0;
  const auto r = npi::plant_rates(p, 99.0, 1.0, -1.0);
  CHECK(r.dx == 0.0);
  CHECK(r.dy == 0.0);  // f(y) + b u = 1 - 1
}

TEST_CASE("origin is an equilibrium") {
  npi::PlantConfig p;
  p.kind = npi::PlantKind::perturbed;
  p.f = npi::nonlinearity_sin2(3.0);
  p.b = 1.0;
  p.epsilon = 0.1;
  const auto r = npi::plant_rates(p, 0.0, 0.0, 0.0);
  CHECK(r.dx == 0.0);
  CHECK(r.dy == 0.0);
}

TEST_CASE("rates are Lipschitz on a bounded box") {
  // finite differences of the rhs stay below the analytic slope bound
  npi::PlantConfig p;
  p.kind = npi::PlantKind::perturbed;
  p.f = npi::nonlinearity_sin2(3.0);
  p.b = 1.0;
  p.epsilon = 0.1;
  const double B = 10.0;
  // |f'(x)| <= 3(1 + sin^2 x) + 3|x sin 2x| <= 6 + 3B on [-B, B]
  const double lip = 6.0 + 3.0 * B + 1.0 / p.epsilon;
  const double h = 1e-6;
  for (int i = 0; i <= 100; ++i) {
    const double x = -B + 2.0 * B * i / 100.0;
    const auto r1 = npi::plant_rates(p, x, 0.5, 0.0);
    const auto r2 = npi::plant_rates(p, x + h, 0.5, 0.0);
    CHECK(std::abs(r2.dx - r1.dx) <= lip * h + 1e-12);
    CHECK(std::abs(r2.dy - r1.dy) <= lip * h + 1e-12);
  }
}

TEST_CASE("plant validation") {
  npi::PlantConfig p;
  p.kind = npi::PlantKind::perturbed;
  p.f = npi::nonlinearity_zero();
  p.b = 0.0;
  p.epsilon = 0.1;
  CHECK_THROWS_AS(npi::validate_plant(p), std::invalid_argument);
  p.b = 1.0;
  p.epsilon = 0.0;
  CHECK_THROWS_AS(npi::validate_plant(p), std::invalid_argument);
  p.epsilon = 0.1;
  CHECK_NOTHROW(npi::validate_plant(p));
}
