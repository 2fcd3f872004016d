#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "betaflow/closed_form.hpp"
#include "betaflow/column.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/finite_difference.hpp"
#include "test_support.hpp"

using namespace betaflow;

namespace {
const LayerSpec kIrrotational{1, 1000.0, Vorticity{}};
}

TEST_CASE("closed-form flow speed is omega^2/beta westward") {
  const auto c = earth_constants();
  const auto flow = make_closed_form_flow(c, kIrrotational);
  const double u = flow.u(0, 0, 0, 0);
  CHECK(u == closed_form_u(c));
  CHECK(u == Catch::Approx(-232.4781).epsilon(1e-9));
  // with standard beta the magnitude collapses to omega*radius/2
  CHECK(u == Catch::Approx(-0.5 * c.omega * c.radius).epsilon(1e-14));
  CHECK(flow.v(1e5, -3e4, -20.0, 100.0) == 0.0);
  CHECK(flow.w(1e5, -3e4, -20.0, 100.0) == 0.0);
  // constant in every argument
  CHECK(flow.u(9e5, 2e5, -90.0, 4e4) == u);
}

TEST_CASE("closed-form flow has zero curl and divergence") {
  const auto c = earth_constants();
  const auto flow = make_closed_form_flow(c, kIrrotational);
  for (double x : {-1e5, 0.0, 2e5}) {
    for (double z : {-80.0, -5.0}) {
      const auto curl = fd_curl(flow, x, 0.3 * x, z, 0.0);
      CHECK(std::abs(curl.lambda1) < 1e-10);
      CHECK(std::abs(curl.lambda2) < 1e-10);
      CHECK(std::abs(curl.lambda3) < 1e-10);
      CHECK(std::abs(fd_divergence(flow, x, 0.3 * x, z, 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("closed-form flow ignores the declared vorticity values") {
  const auto c = earth_constants();
  const LayerSpec swirling{1, 1000.0, {1e-5, 3e-5, -2e-5}};
  const auto a = make_closed_form_flow(c, kIrrotational);
  const auto b = make_closed_form_flow(c, swirling);
  CHECK(a.u(1.0, 2.0, -3.0, 4.0) == b.u(1.0, 2.0, -3.0, 4.0));
  CHECK(a.v(1.0, 2.0, -3.0, 4.0) == b.v(1.0, 2.0, -3.0, 4.0));
  CHECK(a.w(1.0, 2.0, -3.0, 4.0) == b.w(1.0, 2.0, -3.0, 4.0));
}

TEST_CASE("closed-form flow rejects the degenerate vorticity") {
  const auto c = earth_constants();
  const LayerSpec degenerate{1, 1000.0, {0.0, -2.0 * c.omega, 0.0}};
  CHECK_THROWS_AS(make_closed_form_flow(c, degenerate), DegenerateSystemError);
}

TEST_CASE("vertical coefficient: printed form collapses to gravity under standard beta") {
  const auto c = earth_constants();
  const auto k = vertical_coefficient(c, closed_form_u(c));
  CHECK(std::abs(k.paper - c.gravity) < 1e-12);
  CHECK(std::abs(k.oracle + c.gravity) < 1e-12);
  // the two conventions are exact opposites for the closed-form u
  CHECK(bftest::rel_diff(k.paper, -k.oracle) < 1e-12);
  CHECK(k.select(SignConvention::paper) == k.paper);
  CHECK(k.select(SignConvention::oracle) == k.oracle);
}

TEST_CASE("vertical coefficient with explicit beta follows the closed expressions") {
  const auto c = make_constants(7.29e-5, 1.5e-11, 6.378e6, 9.81);
  const double u = -1.9e2;
  const auto k = vertical_coefficient(c, u);
  const double omega3 = c.omega * c.omega * c.omega;
  CHECK(k.paper ==
        Catch::Approx(2.0 * omega3 / c.beta - c.omega * c.omega * c.radius + c.gravity)
            .epsilon(1e-14));
  CHECK(k.oracle ==
        Catch::Approx(2.0 * c.omega * u + c.omega * c.omega * c.radius - c.gravity)
            .epsilon(1e-14));
}

TEST_CASE("vertical coefficient tends to plus/minus gravity as omega vanishes") {
  const auto c = make_constants(1e-9, std::nullopt, 6.378e6, 9.81);
  const auto k = vertical_coefficient(c, closed_form_u(c));
  CHECK(k.paper == Catch::Approx(c.gravity).epsilon(1e-9));
  CHECK(k.oracle == Catch::Approx(-c.gravity).epsilon(1e-9));
}

TEST_CASE("momentum-consistent pressure cancels the y^2 term only for the closed-form u") {
  const auto c = earth_constants();
  const double rho = 1000.0;

  const auto balanced = momentum_consistent_pressure(c, rho, closed_form_u(c));
  CHECK(std::abs(balanced.y2_coeff) < 1e-18);
  CHECK(balanced.z_coeff ==
        Catch::Approx(rho * vertical_coefficient(c, closed_form_u(c)).oracle).epsilon(1e-15));

  const auto still = momentum_consistent_pressure(c, rho, 0.0);
  CHECK(still.y2_coeff == Catch::Approx(-0.5 * rho * c.omega * c.omega).epsilon(1e-15));
  CHECK_THROWS_AS(momentum_consistent_pressure(c, 0.0, 0.0), ValidationError);
}
