#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "npi/quadrature.hpp"

TEST_CASE("polynomials and trig integrate to their antiderivatives") {
  CHECK(npi::integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        Catch::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(npi::integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        Catch::Approx(2.0).epsilon(1e-12));
  CHECK(npi::integrate([](double x) { return std::exp(-x); }, 0.0, 10.0) ==
        Catch::Approx(1.0 - std::exp(-10.0)).epsilon(1e-12));
}

TEST_CASE("empty and reversed intervals") {
  CHECK(npi::integrate([](double x) { return x; }, 3.0, 3.0) == 0.0);
  const double fwd = npi::integrate([](double x) { return x * x * std::cos(x); }, 0.0, 5.0);
  const double rev = npi::integrate([](double x) { return x * x * std::cos(x); }, 5.0, 0.0);
  CHECK(rev == Catch::Approx(-fwd).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand with cancellation") {
  // ∫ z^2 cos z = z^2 sin z + 2 z cos z - 2 sin z
  auto exact = [](double z) {
    return z * z * std::sin(z) + 2.0 * z * std::cos(z) - 2.0 * std::sin(z);
  };
  const double hi = 20.0 * M_PI;
  const double got = npi::integrate([](double z) { return z * z * std::cos(z); }, 0.0, hi);
  CHECK(std::abs(got - exact(hi)) <= 1e-9 * (1.0 + std::abs(exact(hi))));
}

TEST_CASE("refinement exhaustion raises QuadratureError") {
  CHECK_THROWS_AS(
      npi::integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 50.0, 1e-14, 3),
      npi::QuadratureError);
}
