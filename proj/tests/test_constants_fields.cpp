#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "betaflow/closed_form.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/fields.hpp"
#include "betaflow/finite_difference.hpp"
#include "test_support.hpp"

using namespace betaflow;

TEST_CASE("standard beta is 2*omega/radius") {
  const auto c = make_constants(7.29e-5, std::nullopt, 6.378e6, 9.81);
  CHECK(c.beta == 2.0 * c.omega / c.radius);
  CHECK(c.beta == Catch::Approx(2.2859830667920978e-11).epsilon(1e-15));
  CHECK(c.beta_derived);
  CHECK(c.beta == c.beta_standard());
}

TEST_CASE("explicit beta passes through") {
  const auto c = make_constants(7.29e-5, 2.286e-11, 6.378e6, 9.81);
  CHECK(c.beta == 2.286e-11);
  CHECK_FALSE(c.beta_derived);
  CHECK(c.beta != c.beta_standard());
}

TEST_CASE("constants validation rejects non-positive inputs") {
  CHECK_THROWS_AS(make_constants(0.0, std::nullopt, 6.378e6, 9.81), ValidationError);
  CHECK_THROWS_AS(make_constants(7.29e-5, std::nullopt, -1.0, 9.81), ValidationError);
  CHECK_THROWS_AS(make_constants(7.29e-5, std::nullopt, 6.378e6, 0.0), ValidationError);
  CHECK_THROWS_AS(make_constants(7.29e-5, -2e-11, 6.378e6, 9.81), ValidationError);
}

TEST_CASE("tilde transform of zero pressure matches the shift terms") {
  const auto c = earth_constants();
  const double rho = 1025.0;
  const PressureField zero{[](double, double, double, double) { return 0.0; }};
  const auto tilde = tilde_transform(zero, rho, c);
  for (double y : {-2000.0, 0.0, 1.0, 5000.0}) {
    for (double z : {-50.0, -1.0, 0.0}) {
      const double expected =
          rho * (-0.5 * c.omega * c.omega * y * y +
                 (c.omega * c.omega * c.radius - c.gravity) * z);
      CHECK(tilde(3.0, y, z, 7.0) == Catch::Approx(expected).margin(1e-12));
    }
  }
}

TEST_CASE("tilde transform round trip is the identity") {
  const auto c = earth_constants();
  const double rho = 1000.0;
  const PressureField p{[](double x, double y, double z, double t) {
    return 101325.0 - 9810.0 * z + 2.5e-6 * y * y + 0.3 * x + 0.01 * t + 40.0 * std::sin(1e-5 * x);
  }};
  const auto round_trip = tilde_inverse(tilde_transform(p, rho, c), rho, c);

  std::mt19937 rng(42);
  for (int i = 0; i < 100; ++i) {
    const double x = bftest::uniform(rng, -1e6, 1e6);
    const double y = bftest::uniform(rng, -1e6, 1e6);
    const double z = bftest::uniform(rng, -100.0, 0.0);
    const double t = bftest::uniform(rng, 0.0, 3600.0);
    CHECK(bftest::rel_diff(round_trip(x, y, z, t), p(x, y, z, t)) < 1e-12);
  }
}

TEST_CASE("affine tilde transform agrees with the field transform") {
  // Small omega: the z shift approaches -gravity, so a hydrostatic column
  // with z_coeff -rho*g picks up almost exactly another -rho*g.
  const auto c = make_constants(1e-9, std::nullopt, 6.378e6, 9.81);
  const double rho = 1000.0;
  PressureAffine p;
  p.z_coeff = -rho * c.gravity;
  p.offset = 101325.0;

  const auto tilde = tilde_transform(p, rho, c);
  const auto tilde_field = tilde_transform(p.as_field(), rho, c);
  for (double z : {-80.0, -10.0, 0.0}) {
    for (double y : {-1e5, 0.0, 2e5}) {
      CHECK(bftest::rel_diff(tilde(1.0, y, z, 0.0), tilde_field(1.0, y, z, 0.0)) < 1e-14);
    }
  }
  const double z_coeff_probe = tilde_field(0, 0, 1.0, 0) - tilde_field(0, 0, 0.0, 0);
  CHECK(z_coeff_probe ==
        Catch::Approx(-rho * c.gravity + rho * (c.omega * c.omega * c.radius - c.gravity))
            .epsilon(1e-12));
  CHECK(tilde_inverse(tilde, rho, c).z_coeff == Catch::Approx(p.z_coeff).epsilon(1e-15));
}

TEST_CASE("tilde transform rejects non-positive density") {
  const auto c = earth_constants();
  const PressureField zero{[](double, double, double, double) { return 0.0; }};
  CHECK_THROWS_AS(tilde_transform(zero, 0.0, c), ValidationError);
  CHECK_THROWS_AS(tilde_inverse(zero, -1.0, c), ValidationError);
}

TEST_CASE("pressure affine with zero x and y2 coefficients depends on z only") {
  PressureAffine p;
  p.z_coeff = -9810.0;
  p.offset = 101325.0;
  const double base = p(0.0, 0.0, -25.0, 0.0);
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    const double x = bftest::uniform(rng, -1e7, 1e7);
    const double y = bftest::uniform(rng, -1e7, 1e7);
    const double t = bftest::uniform(rng, 0.0, 1e5);
    CHECK(p(x, y, -25.0, t) == base);
  }
}

TEST_CASE("sampled surface slope respects the declared bound") {
  const auto surf = sinusoidal_surface(-10.0, 2.0, 1e-4, 5e-5, 0.1);
  REQUIRE(surf.y_slope_bound.has_value());
  const double bound = *surf.y_slope_bound;
  CHECK(bound == Catch::Approx(2.0 * 5e-5));
  double worst = 0.0;
  for (int i = -100; i <= 100; ++i) {
    const double y = 1e5 * (i / 100.0);
    worst = std::max(worst, std::abs(surface_y_slope(surf, 123.0, y, 17.0)));
  }
  CHECK(worst <= bound + 1e-12);

  const auto flat = constant_surface(-3.0);
  CHECK(surface_y_slope(flat, 0.0, 0.0, 0.0) == 0.0);
  const auto tilted = affine_surface(1.0, 0.0, 1e-3);
  CHECK(surface_y_slope(tilted, 5.0, -4.0, 2.0) == Catch::Approx(1e-3).epsilon(1e-12));
}
